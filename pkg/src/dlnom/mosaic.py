"""Joint consistency modulo Σ-bisimulations, decided with mosaics.

Two engines share the conditions on mosaic sets:

``explicit``
    Enumerates candidate universes (one per choice of nominal types,
    nominal carriers and ∃u-profiles), then removes bad mosaics until a
    greatest fixpoint is reached.  Faithful and tiny-input only.

``lazy`` (default)
    Works with antichains of maximal mosaics.  Without inverse roles a
    mosaic set saturated for existentials stays saturated when closed
    downward, so the greatest good set is represented by its maximal
    elements and every round replaces each maximal element by its maximal
    saturated sub-mosaics.  Nominal carriers are fixed by branching on the
    fixpoint.  With inverse roles the same search runs on forward coherence
    only, which over-approximates; "inconsistent" answers remain exact and
    "consistent" leaves are confirmed by an explicit fixpoint below the
    antichain.  A leaf too large to confirm raises :class:`BudgetExceeded`
    if no other leaf succeeds.

A consistent verdict carries witness models built from the good set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb

from .coherence import Mosaic, PairSpace
from .dlcore import (
    Concept, Dialect, Name, Nominal, Ontology, Role, Signature, require_dialect,
    signature, to_text, xi_closure,
)
from .semantics import (
    BisimRelation, Interpretation, eval_concept, is_bisimulation, is_model,
    largest_bisimulation,
)
from .typespace import DEFAULT_MAX_CLOSURE, BudgetExceeded, bits, popcount

__all__ = [
    "JointProblem", "JointVerdict", "Witness", "Universe", "jointly_consistent",
    "enumerate_universes", "eliminate", "build_witness_models", "validate_witness", "solve",
    "DEFAULT_MAX_MOSAICS",
]

DEFAULT_MAX_MOSAICS = 1 << 20
DEFAULT_MAX_EXPLICIT = 1 << 14
DEFAULT_MAX_UNIVERSES = 1 << 11


# ---------------------------------------------------------------- problem


class JointProblem:
    """Inputs of one joint-consistency question plus the shared tables."""

    def __init__(self, o1: Ontology, c1: Concept, o2: Ontology, c2: Concept,
                 sigma: Signature, dialect: Dialect, max_closure: int = DEFAULT_MAX_CLOSURE,
                 max_types: int | None = None, max_mosaics: int = DEFAULT_MAX_MOSAICS,
                 max_explicit: int = DEFAULT_MAX_EXPLICIT,
                 max_universes: int = DEFAULT_MAX_UNIVERSES):
        require_dialect(dialect, o1, c1, o2, c2)
        self.o = {1: o1, 2: o2}
        self.c = {1: c1, 2: c2}
        self.sigma = sigma
        self.dialect = dialect
        self.max_mosaics = max_mosaics
        self.max_explicit = max_explicit
        self.max_universes = max_universes
        extra = [Name(a) for a in sorted(sigma.concepts)]
        extra += [Nominal(a) for a in sorted(sigma.individuals)] if dialect.nominals else []
        self.closure = xi_closure(o1, o2, c1, c2, extra)
        self.ps = PairSpace(self.closure, o1, o2, sigma, dialect,
                            max_closure=max_closure, max_types=max_types)
        self.real = {1: self.ps.ts(1).realizable()}
        self.real[2] = self.real[1] if self.ps.ts(2) is self.ps.ts(1) else self.ps.ts(2).realizable()
        self.goal = {i: self.ps.ts(i).member_mask(self.c[i]) for i in (1, 2)}
        self.nominals = self.ps.ts(1).nominals
        self.full = dialect.inverse
        self.need_both = dialect.universal

    def ts(self, i):
        return self.ps.ts(i)

    def profiles(self, i: int) -> list:
        """``(profile, allowed types)`` per ∃u-profile occurring among realizable types."""
        ts = self.ts(i)
        return [(ts.types[_low(c)] & ts.umask, c) for c in ts.u_classes(self.real[i])]

    def obligations(self, i: int, ti: int) -> list:
        ts = self.ts(i)
        return [(k, ts.exist_role[k]) for k in ts.obligations(ti)]

    def valid(self, m: Mosaic) -> bool:
        if self.need_both:
            return bool(m.t1 and m.t2)
        return bool(m.t1 or m.t2)

    def has_goal(self, m: Mosaic) -> bool:
        return bool(m.t1 & self.goal[1]) and bool(m.t2 & self.goal[2])

    def nominal_mask(self, i: int, a: str) -> int:
        return self.ts(i).nominal_types(a)

    def describe(self, m: Mosaic) -> dict:
        return {"T1": list(bits(m.t1)), "T2": list(bits(m.t2))}

    def type_text(self, i: int, ti: int) -> list:
        return [to_text(c) for c in self.ts(i).type_concepts(ti)]


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _maximal(ms) -> list:
    """Antichain of maximal elements, canonically ordered."""
    uniq = sorted(set(ms), key=lambda m: (-(popcount(m.t1) + popcount(m.t2)), m))
    kept = []
    for m in uniq:
        if not any(m.le(k) for k in kept):
            kept.append(m)
    return sorted(kept)


# ---------------------------------------------------------------- verdicts


@dataclass
class Witness:
    i1: Interpretation
    d1: object
    i2: Interpretation
    d2: object
    relation: BisimRelation

    def to_json(self) -> dict:
        return {
            "model1": self.i1.to_json(), "point1": str(self.d1),
            "model2": self.i2.to_json(), "point2": str(self.d2),
            "relation": self.relation.to_json(),
        }


@dataclass
class JointVerdict:
    consistent: bool
    good_set: list = field(default_factory=list)
    designated: tuple | None = None
    witness: Witness | None = None
    transcript: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def to_json(self, problem: JointProblem | None = None) -> dict:
        out = {"consistent": self.consistent}
        if self.consistent:
            out["good_set"] = [{"T1": list(bits(m.t1)), "T2": list(bits(m.t2))}
                               for m in self.good_set]
            m, t1, t2 = self.designated
            out["designated"] = {"mosaic": {"T1": list(bits(m.t1)), "T2": list(bits(m.t2))},
                                 "t1": t1, "t2": t2}
            if problem is not None:
                out["types"] = {
                    "side1": {str(t): problem.type_text(1, t)
                              for t in sorted({t for m in self.good_set for t in bits(m.t1)})},
                    "side2": {str(t): problem.type_text(2, t)
                              for t in sorted({t for m in self.good_set for t in bits(m.t2)})},
                }
            if self.witness is not None:
                out["witness"] = self.witness.to_json()
        else:
            out["transcript"] = self.transcript
        return out


# ---------------------------------------------------------------- saturation


class _Saturation:
    """Existential saturation checks against a fixed mosaic set."""

    def __init__(self, pb: JointProblem, targets, full: bool):
        self.pb = pb
        self.targets = list(targets)
        self.full = full
        self._cands: dict = {}

    def candidates(self, i: int, ti: int, k: int, r: Role) -> list:
        """``(target, forbidden)`` pairs able to witness obligation k of ti."""
        key = (i, ti, k)
        out = self._cands.get(key)
        if out is None:
            w = self.pb.ts(i).witness(ti, k)
            ps = self.pb.ps
            out = [(m, ps.fail_pair(i, r, m)) for m in self.targets if m.side(i) & w]
            self._cands[key] = out
        return out

    def witnessed(self, q: Mosaic, i: int, ti: int, k: int, r: Role) -> bool:
        ps = self.pb.ps
        for target, bad in self.candidates(i, ti, k, r):
            if q.t1 & bad.t1 or q.t2 & bad.t2:
                continue
            if self.full and not all(ps.backward(q, target, s)
                                     for s in ps.sigma_supers(i, r)):
                continue
            return True
        return False

    def first_gap(self, q: Mosaic):
        """The first unwitnessed obligation ``(i, ti, k, r)`` of ``q`` or None."""
        for i in (1, 2):
            for ti in bits(q.side(i)):
                for k, r in self.pb.obligations(i, ti):
                    if not self.witnessed(q, i, ti, k, r):
                        return i, ti, k, r
        return None


# ---------------------------------------------------------------- lazy engine


class _Lazy:
    def __init__(self, pb: JointProblem, stats: dict, transcript: list, order_seed=None):
        self.pb = pb
        self.stats = stats
        self.transcript = transcript
        self.rng = random.Random(order_seed) if order_seed is not None else None
        self.generated = 0

    def _count(self, n=1):
        self.generated += n
        self.stats["mosaics"] = self.stats.get("mosaics", 0) + n
        if self.generated > self.pb.max_mosaics:
            raise BudgetExceeded(
                f"more than {self.pb.max_mosaics} candidate mosaics",
                closure=len(self.pb.closure), types1=len(self.pb.ts(1).types),
                types2=len(self.pb.ts(2).types), mosaics=self.generated)

    def split(self, q: Mosaic, sat: _Saturation, memo: dict) -> list:
        """Maximal sub-mosaics of ``q`` saturated with respect to ``sat``."""
        if q in memo:
            return memo[q]
        if not self.pb.valid(q):
            memo[q] = []
            return []
        self._count()
        gap = sat.first_gap(q)
        if gap is None:
            memo[q] = [q]
            return [q]
        i, ti, k, r = gap
        drop = Mosaic(q.t1 & ~(1 << ti), q.t2) if i == 1 else Mosaic(q.t1, q.t2 & ~(1 << ti))
        out = list(self.split(drop, sat, memo))
        for target, bad in sat.candidates(i, ti, k, r):
            if (bad.side(i) >> ti) & 1:
                continue
            sub = q.minus(bad.t1, bad.t2)
            if sub != q:
                out.extend(self.split(sub, sat, memo))
        out = _maximal(out)
        memo[q] = out
        return out

    def fixpoint(self, ms: list) -> list:
        ms = _maximal(m for m in ms if self.pb.valid(m))
        rounds = 0
        while True:
            rounds += 1
            self.stats["rounds"] = self.stats.get("rounds", 0) + 1
            sat = _Saturation(self.pb, ms, full=False)
            memo: dict = {}
            order = list(ms)
            if self.rng is not None:
                self.rng.shuffle(order)
            pieces = []
            for m in order:
                pieces.extend(self.split(m, sat, memo))
            new = _maximal(pieces)
            if new == ms:
                return ms
            kept = set(new)
            for m in ms:
                if m not in kept:
                    gap = sat.first_gap(m)
                    event = {"event": "shrink", "mosaic": self.pb.describe(m)}
                    if gap is not None:
                        i, ti, k, _ = gap
                        event["side"] = i
                        event["type"] = ti
                        event["unwitnessed"] = to_text(self.pb.closure.members[k])
                    self.transcript.append(event)
            ms = new

    # ------------------------------------------------------------ nominals

    def _strip(self, ms: list, i: int, remove: int) -> list:
        if i == 1:
            out = [Mosaic(m.t1 & ~remove, m.t2) for m in ms]
        else:
            out = [Mosaic(m.t1, m.t2 & ~remove) for m in ms]
        return _maximal(m for m in out if self.pb.valid(m))

    def _open_nominal(self, ms: list):
        """First (a, side) whose type or carrier is not yet unique.

        Returns ``None`` when all are settled, ``False`` when some nominal
        has no type left on a side.
        """
        for a in self.pb.nominals:
            for i in (1, 2):
                cand = 0
                for m in ms:
                    cand |= m.side(i) & self.pb.nominal_mask(i, a)
                if not cand:
                    return False
                holders = [m for m in ms if m.side(i) & cand]
                if popcount(cand) > 1 or len(holders) > 1:
                    return a, i, cand
        return None

    def search(self, ms: list):
        """Depth-first over nominal choices; yields settled fixpoints with the goal."""
        ms = self.fixpoint(ms)
        if not any(self.pb.has_goal(m) for m in ms):
            return
        open_ = self._open_nominal(ms)
        if open_ is False:
            self.transcript.append({"event": "nominal-lost"})
            return
        if open_ is None:
            yield ms
            return
        a, i, cand = open_
        for t in bits(cand):
            stripped = self._strip(ms, i, cand & ~(1 << t))
            holders = [m for m in stripped if (m.side(i) >> t) & 1]
            self.stats["branches"] = self.stats.get("branches", 0) + 1
            self.transcript.append({"event": "choose-nominal-type", "individual": a,
                                    "side": i, "type": t, "holders": len(holders)})
            if len(holders) <= 1:
                yield from self.search(stripped)
                continue
            for h in holders:
                rest = [m if m == h else
                        (Mosaic(m.t1 & ~(1 << t), m.t2) if i == 1 else Mosaic(m.t1, m.t2 & ~(1 << t)))
                        for m in stripped]
                keep = [h] + [m for m in rest if m != h and self.pb.valid(m) and not m.le(h)]
                self.transcript.append({"event": "choose-carrier", "individual": a, "side": i,
                                        "mosaic": self.pb.describe(h)})
                yield from self.search(sorted(set(keep)))


def _initial_cells(pb: JointProblem, allowed: dict) -> list:
    cells: dict = {}
    for i in (1, 2):
        for t in bits(allowed[i]):
            key = pb.ps.cell(i, t)
            pair = cells.setdefault(key, [0, 0])
            pair[i - 1] |= 1 << t
    return [Mosaic(a, b) for _, (a, b) in sorted(cells.items())]


# ---------------------------------------------------------------- full goodness


def good_set_problems(pb: JointProblem, ms: list, full: bool | None = None) -> list:
    """Reasons why ``ms`` is not a good set (empty list when it is)."""
    full = pb.full if full is None else full
    problems = []
    sat = _Saturation(pb, ms, full=full)
    for m in ms:
        if not pb.valid(m):
            problems.append(("empty-side", m))
        cells = {pb.ps.cell(i, t) for i in (1, 2) for t in bits(m.side(i))}
        if len(cells) > 1:
            problems.append(("sigma-coherence", m))
        for i in (1, 2):
            if m.side(i) & ~pb.real[i]:
                problems.append(("unrealizable", m))
        gap = sat.first_gap(m)
        if gap is not None:
            problems.append(("saturation", m, gap[:3]))
    for a in pb.nominals:
        for i in (1, 2):
            carriers = [m for m in ms if m.side(i) & pb.nominal_mask(i, a)]
            types = 0
            for m in carriers:
                types |= m.side(i) & pb.nominal_mask(i, a)
            if popcount(types) != 1 or len(carriers) != 1:
                problems.append(("nominal", a, i))
            elif a in pb.sigma.individuals and pb.dialect.nominals:
                m = carriers[0]
                if popcount(m.t1) > 1 or popcount(m.t2) > 1:
                    problems.append(("nominal-shape", a, i))
    return problems


# ---------------------------------------------------------------- explicit fixpoint


def eliminate(pb: JointProblem, universe, full: bool | None = None, order_seed=None,
              transcript: list | None = None) -> list:
    """Greatest subset of ``universe`` in which every mosaic is saturated.

    ``order_seed`` shuffles the order in which mosaics are examined; the
    result does not depend on it.
    """
    full = pb.full if full is None else full
    alive = set(universe)
    order = sorted(alive)
    if order_seed is not None:
        random.Random(order_seed).shuffle(order)
    by_type = {1: {}, 2: {}}
    for m in order:
        for i in (1, 2):
            for t in bits(m.side(i)):
                by_type[i].setdefault(t, []).append(m)
    ps = pb.ps

    def saturated(m):
        for i in (1, 2):
            ts = pb.ts(i)
            for ti in bits(m.side(i)):
                for k, r in pb.obligations(i, ti):
                    found = False
                    seen = set()
                    for t in bits(ts.witness(ti, k)):
                        for target in by_type[i].get(t, ()):
                            if target in seen or target not in alive:
                                continue
                            seen.add(target)
                            if all(ps.forward(m, target, s) and
                                   (not full or ps.backward(m, target, s))
                                   for s in ps.sigma_supers(i, r)):
                                found = True
                                break
                        if found:
                            break
                    if not found:
                        return False, (i, ti, k)
        return True, None

    changed = True
    while changed:
        changed = False
        for m in order:
            if m not in alive:
                continue
            ok, gap = saturated(m)
            if not ok:
                alive.discard(m)
                changed = True
                if transcript is not None:
                    i, ti, k = gap
                    transcript.append({"event": "eliminate", "mosaic": pb.describe(m),
                                       "side": i, "type": ti,
                                       "unwitnessed": to_text(pb.closure.members[k])})
    return sorted(alive)


def _submosaics(pb: JointProblem, ms: list, budget: int, width: int | None = None) -> list:
    """Valid sub-mosaics of ``ms`` with at most ``width`` types per side."""
    def count(n):
        top = n if width is None else min(n, width)
        return sum(comb(n, j) for j in range(top + 1))
    total = sum(count(popcount(m.t1)) * count(popcount(m.t2)) for m in ms)
    if total > budget:
        raise BudgetExceeded(f"{total} sub-mosaics exceed the explicit budget {budget}",
                             submosaics=total)
    out = set()
    for m in ms:
        for a in _submasks(m.t1, width):
            for b in _submasks(m.t2, width):
                q = Mosaic(a, b)
                if pb.valid(q):
                    out.add(q)
    return sorted(out)


def _confirm_full(pb: JointProblem, leaf: list, transcript) -> list | None:
    """A good set under full coherence below ``leaf``, or None if there is none.

    Families of sub-mosaics with at most k types per side are tried for
    growing k; any of them may yield a good set, only the last one (all
    sub-mosaics) can refute the leaf.
    """
    widest = max(max(popcount(m.t1), popcount(m.t2)) for m in leaf)
    for width in range(1, widest + 1):
        family = _submosaics(pb, leaf, pb.max_explicit, width)
        s0 = eliminate(pb, family, full=True)
        found = _settle_carriers(pb, s0, True, transcript)
        if found is not None:
            return found
    return None


def _submasks(mask: int, width: int | None = None):
    if width is None or width >= popcount(mask):
        sub = mask
        while True:
            yield sub
            if sub == 0:
                return
            sub = (sub - 1) & mask
        return
    ids = list(bits(mask))
    for j in range(width + 1):
        for pick in combinations(ids, j):
            out = 0
            for t in pick:
                out |= 1 << t
            yield out


def _settle_carriers(pb: JointProblem, survivors: list, full: bool, transcript):
    """Branch over nominal carriers below a fixpoint; return a good set or None."""
    for a in pb.nominals:
        for i in (1, 2):
            mask = pb.nominal_mask(i, a)
            carriers = [m for m in survivors if m.side(i) & mask]
            types = 0
            for m in carriers:
                types |= m.side(i) & mask
            if not carriers:
                return None
            if popcount(types) == 1 and len(carriers) == 1:
                continue
            for c in sorted(carriers, key=lambda m: (-(popcount(m.t1) + popcount(m.t2)), m)):
                rest = [m for m in survivors if m == c or not (m.side(i) & mask)]
                s0 = eliminate(pb, rest, full=full)
                if c not in s0 or not any(pb.has_goal(m) for m in s0):
                    continue
                found = _settle_carriers(pb, s0, full, transcript)
                if found is not None:
                    return found
            return None
    if not any(pb.has_goal(m) for m in survivors):
        return None
    return survivors


# ---------------------------------------------------------------- universes


@dataclass(frozen=True)
class Universe:
    profiles: tuple
    nominal_types: tuple
    carriers: tuple
    mosaics: tuple


def enumerate_universes(pb: JointProblem):
    """All candidate universes: one per ∃u-profile pair, choice of nominal
    types and choice of nominal carriers.  Exponential; for tiny inputs."""
    budget = pb.max_explicit
    for (p1, a1), (p2, a2) in product(pb.profiles(1), pb.profiles(2)):
        allowed = {1: a1, 2: a2}
        choices = []
        for a in pb.nominals:
            for i in (1, 2):
                choices.append([(a, i, t) for t in bits(allowed[i] & pb.nominal_mask(i, a))])
        for pick in product(*choices):
            chosen = {1: 0, 2: 0}
            ok = True
            for a, i, t in pick:
                chosen[i] |= 1 << t
            for a, i, t in pick:
                # a chosen type must be the only one for every nominal it carries
                for b in pb.nominals:
                    if (pb.ts(i).types[t] >> pb.ts(i).nominal_member[b]) & 1:
                        if chosen[i] & pb.nominal_mask(i, b) != 1 << t:
                            ok = False
            if not ok:
                continue
            nominal_all = {i: 0 for i in (1, 2)}
            for a in pb.nominals:
                for i in (1, 2):
                    nominal_all[i] |= pb.nominal_mask(i, a)
            plain = {i: allowed[i] & ~nominal_all[i] for i in (1, 2)}
            base = []
            count = 0
            for cell in _initial_cells(pb, plain):
                count += 1 << (popcount(cell.t1) + popcount(cell.t2))
                if count > budget:
                    raise BudgetExceeded(f"universe exceeds {budget} mosaics", mosaics=count)
                for x in _submasks(cell.t1):
                    for y in _submasks(cell.t2):
                        m = Mosaic(x, y)
                        if pb.valid(m):
                            base.append(m)
            units = sorted({(i, t) for _, i, t in pick})
            for carriers in _carrier_choices(pb, units, allowed, nominal_all):
                yield Universe((p1, p2), tuple(pick), tuple(carriers),
                               tuple(sorted(set(base) | set(carriers))))


def _carrier_choices(pb: JointProblem, units: list, allowed: dict, nominal_all: dict):
    """Assign each chosen nominal type one carrier mosaic, consistently."""
    unit_set = set(units)

    def options(i, t):
        cell = pb.ps.cell(i, t)
        pool = {j: 0 for j in (1, 2)}
        for j in (1, 2):
            for u in bits(allowed[j] & ~nominal_all[j]):
                if pb.ps.cell(j, u) == cell:
                    pool[j] |= 1 << u
        fixed = {1: 0, 2: 0}
        for j, u in units:
            if pb.ps.cell(j, u) == cell:
                fixed[j] |= 1 << u
        out = []
        for x in _submasks(pool[1] | fixed[1]):
            for y in _submasks(pool[2] | fixed[2]):
                m = Mosaic(x, y)
                if (m.side(i) >> t) & 1 and pb.valid(m):
                    out.append(m)
        return sorted(out)

    def rec(pos, placed, acc):
        if pos == len(units):
            yield list(acc)
            return
        i, t = units[pos]
        if (i, t) in placed:
            yield from rec(pos + 1, placed, acc)
            return
        for m in options(i, t):
            inside = {(j, u) for j in (1, 2) for u in bits(m.side(j) & nominal_all[j])}
            if not inside <= unit_set or inside & placed:
                continue
            yield from rec(pos + 1, placed | inside, acc + [m])

    yield from rec(0, frozenset(), [])


# ---------------------------------------------------------------- entry point


def jointly_consistent(o1: Ontology, c1: Concept, o2: Ontology, c2: Concept,
                       sigma: Signature, dialect: Dialect, engine: str = "lazy",
                       order_seed=None, witness: bool = True, **budgets) -> JointVerdict:
    """Decide whether O1,C1 and O2,C2 are jointly consistent modulo Σ-bisimulations."""
    pb = JointProblem(o1, c1, o2, c2, sigma, dialect, **budgets)
    return solve(pb, engine=engine, order_seed=order_seed, witness=witness)


def solve(pb: JointProblem, engine: str = "lazy", order_seed=None,
          witness: bool = True) -> JointVerdict:
    stats = {"closure": len(pb.closure), "types1": len(pb.ts(1).types),
             "types2": len(pb.ts(2).types), "realizable1": popcount(pb.real[1]),
             "realizable2": popcount(pb.real[2])}
    transcript: list = []
    if engine == "explicit":
        found = _solve_explicit(pb, stats, transcript, order_seed)
    elif engine == "lazy":
        found = _solve_lazy(pb, stats, transcript, order_seed)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    if found is None:
        return JointVerdict(False, transcript=transcript, stats=stats)
    good = sorted(found)
    designated = _designate(pb, good)
    verdict = JointVerdict(True, good, designated, transcript=transcript, stats=stats)
    if witness:
        verdict.witness = build_witness_models(pb, good, designated)
    return verdict


def _designate(pb: JointProblem, good: list):
    for m in good:
        if pb.has_goal(m):
            return m, _low(m.t1 & pb.goal[1]), _low(m.t2 & pb.goal[2])
    raise AssertionError("good set without a goal mosaic")


def _solve_lazy(pb: JointProblem, stats, transcript, order_seed):
    lazy = _Lazy(pb, stats, transcript, order_seed)
    deferred = None
    for (p1, a1), (p2, a2) in product(pb.profiles(1), pb.profiles(2)):
        allowed = {1: a1, 2: a2}
        if not (allowed[1] & pb.goal[1] and allowed[2] & pb.goal[2]):
            continue
        transcript.append({"event": "profiles", "side1": p1, "side2": p2})
        for leaf in lazy.search(_initial_cells(pb, allowed)):
            stats["leaves"] = stats.get("leaves", 0) + 1
            if not pb.full:
                return leaf
            if not good_set_problems(pb, leaf):
                return leaf
            try:
                found = _confirm_full(pb, leaf, transcript)
            except BudgetExceeded as exc:
                deferred = deferred or exc
                transcript.append({"event": "leaf-over-budget"})
                continue
            if found is not None:
                return _compact(pb, found)
            transcript.append({"event": "leaf-refuted"})
    if deferred is not None:
        raise deferred
    return None


def _compact(pb: JointProblem, good: list) -> list:
    """Mosaics reachable from a goal mosaic through chosen witnesses.

    Nominal carriers are always kept. Falls back to ``good`` unchanged if
    the reachable part is not itself a good set.
    """
    if not pb.full:
        return good
    sat = _Saturation(pb, good, full=True)
    keep = set()
    stack = [next(m for m in good if pb.has_goal(m))]
    stack += [m for m in good for a in pb.nominals for i in (1, 2)
              if m.side(i) & pb.nominal_mask(i, a)]
    while stack:
        q = stack.pop()
        if q in keep:
            continue
        keep.add(q)
        for i in (1, 2):
            for ti in bits(q.side(i)):
                for k, r in pb.obligations(i, ti):
                    for target, bad in sat.candidates(i, ti, k, r):
                        if q.t1 & bad.t1 or q.t2 & bad.t2:
                            continue
                        if not all(pb.ps.backward(q, target, s) for s in pb.ps.sigma_supers(i, r)):
                            continue
                        stack.append(target)
                        break
    trial = sorted(keep)
    if len(trial) < len(good) and not good_set_problems(pb, trial):
        return trial
    return good


def _solve_explicit(pb: JointProblem, stats, transcript, order_seed):
    for uni in enumerate_universes(pb):
        stats["universes"] = stats.get("universes", 0) + 1
        if stats["universes"] > pb.max_universes:
            raise BudgetExceeded(f"more than {pb.max_universes} universes",
                                 universes=stats["universes"])
        if not any(pb.has_goal(m) for m in uni.mosaics):
            continue
        local: list = []
        s0 = eliminate(pb, uni.mosaics, order_seed=order_seed, transcript=local)
        alive = set(s0)
        if all(c in alive for c in uni.carriers) and any(pb.has_goal(m) for m in s0):
            return s0
        transcript.append({"event": "universe-failed", "eliminated": len(local)})
    return None


# ---------------------------------------------------------------- witnesses


def _elem(t: int, n: int) -> str:
    return f"t{t}@m{n}"


def build_witness_models(pb: JointProblem, good: list, designated) -> Witness:
    """Models of both sides whose elements are (type, mosaic) pairs."""
    ps = pb.ps
    sig = signature(pb.o[1], pb.o[2], pb.c[1], pb.c[2], pb.sigma)
    index = {m: n for n, m in enumerate(good)}
    models = {}
    for i in (1, 2):
        ts = pb.ts(i)
        elems = [(t, m) for m in good for t in bits(m.side(i))]
        dom = [_elem(t, index[m]) for t, m in elems]
        concepts = {}
        for a in sorted(sig.concepts):
            k = pb.closure.index.get(Name(a))
            concepts[a] = [_elem(t, index[m]) for t, m in elems
                           if k is not None and (ts.types[t] >> k) & 1]
        individuals = {}
        for a in ts.nominals:
            bit = ts.nominal_member[a]
            owners = [_elem(t, index[m]) for t, m in elems if (ts.types[t] >> bit) & 1]
            if len(owners) == 1:
                individuals[a] = owners[0]
        roles = {}
        for r in sorted(sig.roles):
            role = Role(r)
            succ = ts.succ(role)
            sup = ps.sigma_supers(i, role)
            mosaic_ok = {}
            for m in good:
                for m2 in good:
                    ok = all(ps.forward(m, m2, s) and (not pb.full or ps.backward(m, m2, s))
                             for s in sup)
                    mosaic_ok[m, m2] = ok
            edges = []
            for t, m in elems:
                for t2, m2 in elems:
                    if (succ[t] >> t2) & 1 and mosaic_ok[m, m2]:
                        edges.append((_elem(t, index[m]), _elem(t2, index[m2])))
            roles[r] = edges
        models[i] = Interpretation(dom, concepts, roles, individuals)
    m, t1, t2 = designated
    pairs = frozenset((_elem(x, index[p]), _elem(y, index[p]))
                      for p in good for x in bits(p.t1) for y in bits(p.t2))
    relation = BisimRelation(pairs, pb.sigma, pb.dialect)
    return Witness(models[1], _elem(t1, index[m]), models[2], _elem(t2, index[m]), relation)


def validate_witness(pb: JointProblem, w: Witness) -> list:
    """Failed checks of a witness bundle (empty when it is sound)."""
    problems = []
    for i, model in ((1, w.i1), (2, w.i2)):
        ok, failing = is_model(model, pb.o[i])
        if not ok:
            problems.append(f"side {i} violates: " + "; ".join(str(a) for a in failing))
    if w.d1 not in eval_concept(w.i1, pb.c[1]):
        problems.append("designated point 1 not in C1")
    if w.d2 not in eval_concept(w.i2, pb.c[2]):
        problems.append("designated point 2 not in C2")
    if (w.d1, w.d2) not in w.relation:
        problems.append("designated points not related")
    if not is_bisimulation(w.i1, w.i2, w.relation.pairs, pb.sigma, pb.dialect):
        problems.append("relation is not a bisimulation")
    largest = largest_bisimulation(w.i1, w.i2, pb.sigma, pb.dialect)
    if not w.relation.pairs <= largest.pairs:
        problems.append("relation not contained in the largest bisimulation")
    return problems
