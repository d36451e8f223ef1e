"""Finite interpretations: evaluation, model checking and bisimulations.

Elements are arbitrary hashable values.  Interpretations read from JSON use
strings; product structures use pairs, which are rendered as ``"x|y"`` when
written back out.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field

from .dlcore import (
    And, Concept, Dialect, Exists, Name, Nominal, Not, Ontology, Role,
    Signature, Top,
)

__all__ = [
    "Interpretation", "BisimRelation", "UninterpretedName", "eval_concept",
    "is_model", "largest_bisimulation", "is_bisimulation", "generated_sub",
    "bisimulation_product", "pull_back", "disjoint_union", "element_label",
]


class UninterpretedName(KeyError):
    """Raised when evaluation reaches an individual the interpretation lacks."""


def element_label(x) -> str:
    if isinstance(x, tuple):
        return "|".join(element_label(y) for y in x)
    return str(x)


@dataclass(frozen=True)
class Interpretation:
    domain: tuple
    concepts: dict = field(default_factory=dict)
    roles: dict = field(default_factory=dict)
    individuals: dict = field(default_factory=dict)

    def __post_init__(self):
        dom = tuple(dict.fromkeys(self.domain))
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "concepts",
                           {k: frozenset(v) for k, v in self.concepts.items()})
        object.__setattr__(self, "roles",
                           {k: frozenset(tuple(p) for p in v) for k, v in self.roles.items()})
        object.__setattr__(self, "individuals", dict(self.individuals))
        members = set(dom)
        for k, ext in self.concepts.items():
            if not ext <= members:
                raise ValueError(f"extension of {k} leaves the domain")
        for k, ext in self.roles.items():
            if any(x not in members or y not in members for x, y in ext):
                raise ValueError(f"extension of {k} leaves the domain")
        for a, x in self.individuals.items():
            if x not in members:
                raise ValueError(f"individual {a} mapped outside the domain")

    def __hash__(self):
        return id(self)

    def concept_ext(self, name: str) -> frozenset:
        return self.concepts.get(name, frozenset())

    def role_ext(self, r: Role) -> frozenset:
        if r.is_universal:
            return frozenset((x, y) for x in self.domain for y in self.domain)
        pairs = self.roles.get(r.name, frozenset())
        if r.inverted:
            return frozenset((y, x) for x, y in pairs)
        return pairs

    def successors(self, r: Role) -> dict:
        out = defaultdict(set)
        for x, y in self.role_ext(r):
            out[x].add(y)
        return out

    def restrict(self, keep) -> "Interpretation":
        keep = set(keep)
        return Interpretation(
            tuple(x for x in self.domain if x in keep),
            {k: v & keep for k, v in self.concepts.items()},
            {k: {(x, y) for x, y in v if x in keep and y in keep} for k, v in self.roles.items()},
            {a: x for a, x in self.individuals.items() if x in keep},
        )

    def with_concept(self, name: str, ext) -> "Interpretation":
        concepts = dict(self.concepts)
        concepts[name] = frozenset(ext)
        return Interpretation(self.domain, concepts, self.roles, self.individuals)

    # ------------------------------------------------------------ I/O

    def to_json(self) -> dict:
        lab = element_label
        return {
            "domain": [lab(x) for x in self.domain],
            "concepts": {k: sorted(lab(x) for x in v) for k, v in sorted(self.concepts.items())},
            "roles": {k: sorted([lab(x), lab(y)] for x, y in v)
                      for k, v in sorted(self.roles.items())},
            "individuals": {a: lab(x) for a, x in sorted(self.individuals.items())},
        }

    @classmethod
    def from_json(cls, data) -> "Interpretation":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(data["domain"]), data.get("concepts", {}),
                   data.get("roles", {}), data.get("individuals", {}))

    def to_dot(self, name: str = "I", highlight=()) -> str:
        lab = element_label
        highlight = set(highlight)
        lines = [f'digraph "{name}" {{']
        for x in self.domain:
            tags = sorted(k for k, v in self.concepts.items() if x in v)
            tags += sorted("{" + a + "}" for a, y in self.individuals.items() if y == x)
            text = lab(x) + ("\\n" + ", ".join(tags) if tags else "")
            style = ", peripheries=2" if x in highlight else ""
            lines.append(f'  "{lab(x)}" [label="{text}"{style}];')
        for r, pairs in sorted(self.roles.items()):
            for x, y in sorted(pairs, key=lambda p: (lab(p[0]), lab(p[1]))):
                lines.append(f'  "{lab(x)}" -> "{lab(y)}" [label="{r}"];')
        lines.append("}")
        return "\n".join(lines)


def eval_concept(interp: Interpretation, c: Concept, _memo=None) -> frozenset:
    """The extension of ``c`` in ``interp``."""
    memo = {} if _memo is None else _memo
    hit = memo.get(c)
    if hit is not None:
        return hit
    if isinstance(c, Top):
        out = frozenset(interp.domain)
    elif isinstance(c, Name):
        out = interp.concept_ext(c.name)
    elif isinstance(c, Nominal):
        if c.individual not in interp.individuals:
            raise UninterpretedName(c.individual)
        out = frozenset([interp.individuals[c.individual]])
    elif isinstance(c, Not):
        out = frozenset(interp.domain) - eval_concept(interp, c.arg, memo)
    elif isinstance(c, And):
        out = eval_concept(interp, c.left, memo) & eval_concept(interp, c.right, memo)
    elif isinstance(c, Exists):
        target = eval_concept(interp, c.arg, memo)
        if c.role.is_universal:
            out = frozenset(interp.domain) if target else frozenset()
        else:
            out = frozenset(x for x, y in interp.role_ext(c.role) if y in target)
    else:
        raise TypeError(f"not a concept: {c!r}")
    memo[c] = out
    return out


def is_model(interp: Interpretation, ontology: Ontology):
    """``(ok, failing)`` where ``failing`` lists the violated axioms."""
    memo = {}
    failing = []
    for ax in ontology.cis:
        if not eval_concept(interp, ax.lhs, memo) <= eval_concept(interp, ax.rhs, memo):
            failing.append(ax)
    for ax in ontology.ris:
        if not interp.role_ext(ax.sub) <= interp.role_ext(ax.sup):
            failing.append(ax)
    return not failing, failing


# ---------------------------------------------------------------- bisimulations


@dataclass(frozen=True)
class BisimRelation:
    pairs: frozenset
    sigma: Signature
    dialect: Dialect

    def __contains__(self, pair):
        return pair in self.pairs

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __le__(self, other: "BisimRelation") -> bool:
        return self.pairs <= other.pairs

    def domain(self) -> set:
        return {x for x, _ in self.pairs}

    def range(self) -> set:
        return {y for _, y in self.pairs}

    def to_json(self) -> list:
        return sorted([element_label(x), element_label(y)] for x, y in self.pairs)


def _roles_for(sigma: Signature, dialect: Dialect) -> list:
    roles = [Role(r) for r in sorted(sigma.roles)]
    if dialect.inverse:
        roles += [r.inverse() for r in roles]
    return roles


def _atom_ok(i1, i2, sigma, dialect, x, y) -> bool:
    for a in sigma.concepts:
        if (x in i1.concept_ext(a)) != (y in i2.concept_ext(a)):
            return False
    if dialect.nominals:
        for a in sigma.individuals:
            if (i1.individuals.get(a, _NOWHERE) == x) != (i2.individuals.get(a, _NOWHERE) == y):
                return False
    return True


_NOWHERE = object()


def _bit_list(mask: int) -> list:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def largest_bisimulation(i1: Interpretation, i2: Interpretation, sigma: Signature,
                         dialect: Dialect) -> BisimRelation:
    """The maximal Σ-bisimulation between ``i1`` and ``i2`` for ``dialect``.

    Role inclusions play no part; inverse roles add forth/back along
    inverses; the universal role demands totality on both sides, and the
    result is empty when the fixpoint is not total.
    """
    roles = _roles_for(sigma, dialect)
    dom1, dom2 = list(i1.domain), list(i2.domain)
    pos1 = {x: n for n, x in enumerate(dom1)}
    pos2 = {y: n for n, y in enumerate(dom2)}
    # successor lists on the left, successor bitmasks on the right
    left = []
    right = []
    for r in roles:
        s1 = i1.successors(r)
        s2 = i2.successors(r)
        left.append([[pos1[z] for z in s1.get(x, ())] for x in dom1])
        masks = []
        for y in dom2:
            m = 0
            for z in s2.get(y, ()):
                m |= 1 << pos2[z]
            masks.append(m)
        right.append(masks)
    rows = []
    for x in dom1:
        m = 0
        for n, y in enumerate(dom2):
            if _atom_ok(i1, i2, sigma, dialect, x, y):
                m |= 1 << n
        rows.append(m)

    changed = True
    while changed:
        changed = False
        for nx in range(len(dom1)):
            row = rows[nx]
            if not row:
                continue
            keep = row
            for succ, masks in zip(left, right):
                out = succ[nx]
                reach = 0
                for z in out:
                    reach |= rows[z]
                for ny in _bit_list(keep):
                    target = masks[ny]
                    if target & ~reach or any(not rows[z] & target for z in out):
                        keep &= ~(1 << ny)
            if keep != row:
                rows[nx] = keep
                changed = True
    rel = {(dom1[nx], dom2[ny]) for nx in range(len(dom1)) for ny in _bit_list(rows[nx])}
    if dialect.universal:
        if {x for x, _ in rel} != set(i1.domain) or {y for _, y in rel} != set(i2.domain):
            rel = set()
    return BisimRelation(frozenset(rel), sigma, dialect)


def is_bisimulation(i1: Interpretation, i2: Interpretation, pairs, sigma: Signature,
                    dialect: Dialect) -> bool:
    """True iff ``pairs`` is itself a Σ-bisimulation (not just contained in one)."""
    pairs = set(pairs)
    if not pairs and dialect.universal and (i1.domain or i2.domain):
        return False
    for x, y in pairs:
        if not _atom_ok(i1, i2, sigma, dialect, x, y):
            return False
    for r in _roles_for(sigma, dialect):
        s1, s2 = i1.successors(r), i2.successors(r)
        for x, y in pairs:
            if any(not any((x2, y2) in pairs for y2 in s2.get(y, ())) for x2 in s1.get(x, ())):
                return False
            if any(not any((x2, y2) in pairs for x2 in s1.get(x, ())) for y2 in s2.get(y, ())):
                return False
    if dialect.universal:
        if {x for x, _ in pairs} != set(i1.domain) or {y for _, y in pairs} != set(i2.domain):
            return False
    return True


# ---------------------------------------------------------------- constructions


def generated_sub(interp: Interpretation, d, sigma: Signature):
    """Restriction of ``interp`` to what ``d`` reaches along Σ role names.

    Only forward edges are followed, also in dialects with inverses.
    Returns ``(interpretation, d)``.
    """
    if d not in set(interp.domain):
        raise ValueError(f"{d!r} is not in the domain")
    succ = defaultdict(set)
    for r in sigma.roles:
        for x, y in interp.roles.get(r, ()):
            succ[x].add(y)
    seen = {d}
    stack = [d]
    while stack:
        x = stack.pop()
        for y in succ[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return interp.restrict(seen), d


def bisimulation_product(i1: Interpretation, i2: Interpretation, rel: BisimRelation):
    """Product structure over the pairs of ``rel``, with its two projections.

    Σ concept and role names are interpreted componentwise; a Σ nominal
    names the pair of its two interpretations when that pair is in ``rel``.
    Returns ``(product, proj1, proj2)`` with the projections as dicts.
    """
    if not is_bisimulation(i1, i2, rel.pairs, rel.sigma, rel.dialect):
        raise ValueError("relation is not a bisimulation")
    sigma = rel.sigma
    dom = tuple(sorted(rel.pairs, key=lambda p: (element_label(p[0]), element_label(p[1]))))
    members = set(dom)
    concepts = {a: {p for p in dom if p[0] in i1.concept_ext(a) and p[1] in i2.concept_ext(a)}
                for a in sorted(sigma.concepts)}
    roles = {}
    for r in sorted(sigma.roles):
        s1, s2 = i1.successors(Role(r)), i2.successors(Role(r))
        roles[r] = {(p, (y1, y2)) for p in dom
                    for y1 in s1.get(p[0], ()) for y2 in s2.get(p[1], ())
                    if (y1, y2) in members}
    individuals = {}
    for a in sorted(sigma.individuals):
        if a in i1.individuals and a in i2.individuals:
            p = (i1.individuals[a], i2.individuals[a])
            if p in members:
                individuals[a] = p
    product = Interpretation(dom, concepts, roles, individuals)
    return product, {p: p[0] for p in dom}, {p: p[1] for p in dom}


def pull_back(product: Interpretation, proj: dict, source: Interpretation,
              names) -> Interpretation:
    """Copy of ``product`` where each concept name in ``names`` is the preimage
    of its extension in ``source`` under ``proj``."""
    out = product
    for a in names:
        ext = source.concept_ext(a)
        out = out.with_concept(a, {p for p in product.domain if proj[p] in ext})
    return out


def disjoint_union(left: Interpretation, right: Interpretation, tags=("L", "R")):
    """Disjoint union with elements tagged by side; individuals of ``left`` win."""
    lt, rt = tags
    dom = tuple((lt, x) for x in left.domain) + tuple((rt, x) for x in right.domain)
    concepts = {}
    for k in set(left.concepts) | set(right.concepts):
        concepts[k] = {(lt, x) for x in left.concept_ext(k)} | {(rt, x) for x in right.concept_ext(k)}
    roles = {}
    for k in set(left.roles) | set(right.roles):
        roles[k] = ({((lt, x), (lt, y)) for x, y in left.roles.get(k, ())}
                    | {((rt, x), (rt, y)) for x, y in right.roles.get(k, ())})
    individuals = {a: (rt, x) for a, x in right.individuals.items()}
    individuals.update({a: (lt, x) for a, x in left.individuals.items()})
    return Interpretation(dom, concepts, roles, individuals)
