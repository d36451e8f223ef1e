"""Brute-force cross-checks for the mosaic engine.

Both oracles are one-sided.  ``bounded_joint_consistency`` looks for a pair
of small models linked by a bisimulation; a hit proves joint consistency.
``enumerate_definitions`` walks Σ-concepts in order of size; a hit proves a
definition exists.  Running out of candidates proves nothing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations

from pysat.solvers import Solver

from .dlcore import (
    TOP, And, Concept, Dialect, Exists, Name, Nominal, Not, Ontology, Role, Signature, Top,
    UNIVERSAL, concept_size, neg, signature, subconcepts,
)
from .mosaic import Witness
from .satcheck import entails_ci, find_model
from .semantics import (
    Interpretation, eval_concept, is_model, largest_bisimulation,
)

__all__ = [
    "SearchBudget", "JointSearchResult", "DefinitionSearchResult",
    "bounded_joint_consistency", "enumerate_definitions", "sigma_concepts",
]


@dataclass(frozen=True)
class SearchBudget:
    max_domain: int = 3
    max_depth: int = 2
    max_candidates: int = 200_000
    max_seconds: float | None = None

    def __post_init__(self):
        if self.max_domain < 1 or self.max_depth < 0 or self.max_candidates < 1:
            raise ValueError("search budget values must be positive")


@dataclass
class JointSearchResult:
    found: bool
    witness: Witness | None = None
    sizes: tuple | None = None
    exhausted: str = ""
    stats: dict = field(default_factory=dict)


@dataclass
class DefinitionSearchResult:
    found: bool
    concept: Concept | None = None
    tried: int = 0
    exhausted: str = ""
    stats: dict = field(default_factory=dict)


# ---------------------------------------------------------------- bounded models


class _Encoder:
    """CNF for two models of bounded size linked by a Σ-bisimulation."""

    def __init__(self):
        self.count = 0
        self.clauses = []
        self.true = self.new()
        self.clauses.append([self.true])

    def new(self) -> int:
        self.count += 1
        return self.count

    def conj(self, a: int, b: int) -> int:
        v = self.new()
        self.clauses += [[-v, a], [-v, b], [v, -a, -b]]
        return v


class _Side:
    def __init__(self, enc: _Encoder, n: int, sig: Signature):
        self.enc = enc
        self.n = n
        self.concepts = {a: [enc.new() for _ in range(n)] for a in sorted(sig.concepts)}
        self.roles = {r: [[enc.new() for _ in range(n)] for _ in range(n)]
                      for r in sorted(sig.roles)}
        self.individuals = {}
        for a in sorted(sig.individuals):
            vs = [enc.new() for _ in range(n)]
            enc.clauses.append(list(vs))
            for x, y in combinations(vs, 2):
                enc.clauses.append([-x, -y])
            self.individuals[a] = vs
        self._lit: dict = {}

    def edge(self, r: Role, x: int, y: int) -> int:
        if r.is_universal:
            return self.enc.true
        if r.inverted:
            return self.roles[r.name][y][x]
        return self.roles[r.name][x][y]

    def lit(self, c: Concept, x: int) -> int:
        key = (c, x)
        hit = self._lit.get(key)
        if hit is not None:
            return hit
        enc = self.enc
        if isinstance(c, Top):
            out = enc.true
        elif isinstance(c, Name):
            out = self.concepts[c.name][x]
        elif isinstance(c, Nominal):
            out = self.individuals[c.individual][x]
        elif isinstance(c, Not):
            out = -self.lit(c.arg, x)
        elif isinstance(c, And):
            out = enc.conj(self.lit(c.left, x), self.lit(c.right, x))
        elif isinstance(c, Exists):
            out = enc.new()
            parts = [enc.conj(self.edge(c.role, x, y), self.lit(c.arg, y)) for y in range(self.n)]
            enc.clauses.append([-out] + parts)
            for p in parts:
                enc.clauses.append([out, -p])
        else:
            raise TypeError(type(c).__name__)
        self._lit[key] = out
        return out

    def decode(self, model: set, prefix: str) -> Interpretation:
        name = lambda x: f"{prefix}{x}"  # noqa: E731
        dom = [name(x) for x in range(self.n)]
        concepts = {a: [name(x) for x in range(self.n) if vs[x] in model]
                    for a, vs in self.concepts.items()}
        roles = {r: [[name(x), name(y)] for x in range(self.n) for y in range(self.n)
                     if m[x][y] in model] for r, m in self.roles.items()}
        individuals = {a: name(next(x for x in range(self.n) if vs[x] in model))
                       for a, vs in self.individuals.items()}
        return Interpretation(dom, concepts, roles, individuals)


def _encode(o1, c1, o2, c2, sigma, dialect, n1, n2, sig):
    enc = _Encoder()
    sides = {1: _Side(enc, n1, sig), 2: _Side(enc, n2, sig)}
    for i, o, c in ((1, o1, c1), (2, o2, c2)):
        s = sides[i]
        for x in range(s.n):
            for ax in o.cis:
                enc.clauses.append([-s.lit(ax.lhs, x), s.lit(ax.rhs, x)])
            for y in range(s.n):
                for ax in o.ris:
                    enc.clauses.append([-s.edge(ax.sub, x, y), s.edge(ax.sup, x, y)])
        enc.clauses.append([s.lit(c, 0)])
    a, b = sides[1], sides[2]
    z = [[enc.new() for _ in range(n2)] for _ in range(n1)]
    enc.clauses.append([z[0][0]])
    for x in range(n1):
        for y in range(n2):
            for name in sorted(sigma.concepts):
                p, q = a.concepts[name][x], b.concepts[name][y]
                enc.clauses += [[-z[x][y], -p, q], [-z[x][y], p, -q]]
            if dialect.nominals:
                for name in sorted(sigma.individuals):
                    p, q = a.individuals[name][x], b.individuals[name][y]
                    enc.clauses += [[-z[x][y], -p, q], [-z[x][y], p, -q]]
    roles = [Role(r) for r in sorted(sigma.roles)]
    if dialect.inverse:
        roles += [r.inverse() for r in roles]
    for r in roles:
        for x in range(n1):
            for y in range(n2):
                for x2 in range(n1):
                    opts = []
                    for y2 in range(n2):
                        m = enc.new()
                        enc.clauses += [[-m, b.edge(r, y, y2)], [-m, z[x2][y2]]]
                        opts.append(m)
                    enc.clauses.append([-z[x][y], -a.edge(r, x, x2)] + opts)
                for y2 in range(n2):
                    opts = []
                    for x2 in range(n1):
                        m = enc.new()
                        enc.clauses += [[-m, a.edge(r, x, x2)], [-m, z[x2][y2]]]
                        opts.append(m)
                    enc.clauses.append([-z[x][y], -b.edge(r, y, y2)] + opts)
    if dialect.universal:
        for x in range(n1):
            enc.clauses.append([z[x][y] for y in range(n2)])
        for y in range(n2):
            enc.clauses.append([z[x][y] for x in range(n1)])
    return enc, sides


def bounded_joint_consistency(o1: Ontology, c1: Concept, o2: Ontology, c2: Concept,
                              sigma: Signature, dialect: Dialect,
                              budget: SearchBudget = SearchBudget()) -> JointSearchResult:
    """Search for models of size ≤ ``budget.max_domain`` witnessing joint consistency.

    Sizes are tried in order of total size; the first hit is returned after
    it has been re-checked with the model checker and the bisimulation
    fixpoint.
    """
    sig = signature(o1, o2, c1, c2, sigma)
    start = time.monotonic()
    stats = {"sat_calls": 0}
    n = budget.max_domain
    for total in range(2, 2 * n + 1):
        for n1 in range(1, n + 1):
            n2 = total - n1
            if not 1 <= n2 <= n:
                continue
            if budget.max_seconds is not None and time.monotonic() - start > budget.max_seconds:
                return JointSearchResult(False, exhausted="time", stats=stats)
            enc, sides = _encode(o1, c1, o2, c2, sigma, dialect, n1, n2, sig)
            stats["sat_calls"] += 1
            with Solver(name="minisat22", bootstrap_with=enc.clauses) as solver:
                if not solver.solve():
                    continue
                model = {v for v in solver.get_model() if v > 0}
            i1 = sides[1].decode(model, "x")
            i2 = sides[2].decode(model, "y")
            rel = largest_bisimulation(i1, i2, sigma, dialect)
            witness = Witness(i1, "x0", i2, "y0", rel)
            _recheck(witness, o1, c1, o2, c2)
            return JointSearchResult(True, witness, (n1, n2), stats=stats)
    return JointSearchResult(False, exhausted="domain bound", stats=stats)


def _recheck(w: Witness, o1, c1, o2, c2):
    problems = []
    if not is_model(w.i1, o1)[0] or not is_model(w.i2, o2)[0]:
        problems.append("not a model")
    if w.d1 not in eval_concept(w.i1, c1) or w.d2 not in eval_concept(w.i2, c2):
        problems.append("designated point misses its concept")
    if (w.d1, w.d2) not in w.relation:
        problems.append("designated points not bisimilar")
    if problems:
        raise AssertionError("bounded search produced a bad witness: " + ", ".join(problems))


# ---------------------------------------------------------------- concept grammar


class _Grammar:
    """Σ-concepts built from literals and binary conjunctions of literals.

    A literal is a concept name, nominal, or existential, possibly negated;
    existentials take a grammar concept of smaller depth as argument.
    """

    def __init__(self, sigma: Signature, dialect: Dialect):
        roles = [Role(r) for r in sorted(sigma.roles)]
        if dialect.inverse:
            roles += [r.inverse() for r in roles]
        if dialect.universal:
            roles.append(UNIVERSAL)
        self.roles = roles
        atoms = [Name(a) for a in sorted(sigma.concepts)]
        if dialect.nominals:
            atoms += [Nominal(a) for a in sorted(sigma.individuals)]
        self.atoms = atoms
        self._lits: dict = {}
        self._concepts: dict = {}

    def literals(self, depth: int, size: int) -> list:
        key = (depth, size)
        if key in self._lits:
            return self._lits[key]
        out = []
        if size == 1:
            out = list(self.atoms)
        elif size == 2:
            out = [Not(a) for a in self.atoms]
        if depth > 0 and size >= 2:
            for r in self.roles:
                out += [Exists(r, c) for c in self.concepts(depth - 1, size - 1)]
            if size >= 3:
                out += [Not(Exists(r, c)) for r in self.roles
                        for c in self.concepts(depth - 1, size - 2)]
        out.sort(key=lambda c: c.key)
        self._lits[key] = out
        return out

    def concepts(self, depth: int, size: int) -> list:
        key = (depth, size)
        if key in self._concepts:
            return self._concepts[key]
        out = list(self.literals(depth, size))
        if size == 1:
            out.append(TOP)
        elif size == 2:
            out.append(Not(TOP))
        for s1 in range(1, size - 1):
            s2 = size - 1 - s1
            if s1 > s2:
                break
            for x in self.literals(depth, s1):
                for y in self.literals(depth, s2):
                    if s1 == s2 and not x.key < y.key:
                        continue
                    if x == neg(y):
                        continue
                    out.append(And(x, y))
        out = sorted(set(out), key=lambda c: c.key)
        self._concepts[key] = out
        return out

    def by_size(self, depth: int, max_size: int):
        for size in range(1, max_size + 1):
            yield from self.concepts(depth, size)


def sigma_concepts(sigma: Signature, dialect: Dialect, depth: int, max_size: int):
    """Grammar concepts over Σ up to ``depth`` and ``max_size``, smallest first."""
    return _Grammar(sigma, dialect).by_size(depth, max_size)


def enumerate_definitions(ontology: Ontology, c: Concept, sigma: Signature, dialect: Dialect,
                          budget: SearchBudget = SearchBudget(),
                          max_size: int = 12) -> DefinitionSearchResult:
    """First Σ-concept (by size, then structure) equivalent to ``c`` under ``ontology``.

    Candidates are screened on sample models before the two entailment
    checks; each failed check contributes its countermodel to the samples.
    """
    start = time.monotonic()
    samples = []
    for probe in (c, neg(c)):
        found = find_model(probe, ontology, dialect)
        if found is not None:
            samples.append(found[0])
    if not samples:
        return DefinitionSearchResult(True, Not(TOP), 0)
    targets = [eval_concept(m, c) for m in samples]
    memos = [{} for _ in samples]
    grammar = _Grammar(sigma, dialect)
    tried = 0
    stats = {"entailment_checks": 0, "samples": len(samples)}
    for d in grammar.by_size(budget.max_depth, max_size):
        tried += 1
        if tried > budget.max_candidates:
            return DefinitionSearchResult(False, None, tried - 1, "candidate budget", stats)
        if budget.max_seconds is not None and time.monotonic() - start > budget.max_seconds:
            return DefinitionSearchResult(False, None, tried, "time", stats)
        if any(eval_concept(m, d, memo) != t for m, memo, t in zip(samples, memos, targets)):
            continue
        stats["entailment_checks"] += 1
        gap = None
        if not entails_ci(ontology, c, d, dialect):
            gap = And(c, neg(d))
        elif not entails_ci(ontology, d, c, dialect):
            gap = And(d, neg(c))
        if gap is None:
            return DefinitionSearchResult(True, d, tried, stats=stats)
        counter = find_model(gap, ontology, dialect)
        samples.append(counter[0])
        targets.append(eval_concept(counter[0], c))
        memos.append({})
        stats["samples"] = len(samples)
    return DefinitionSearchResult(False, None, tried, "grammar exhausted", stats)
