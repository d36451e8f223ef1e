"""Types, mosaics and the coherence relations between them.

A mosaic is a pair of type sets, one per side, stored as two bitmasks over
the type numbering of that side's :class:`TypeSpace`.  :class:`PairSpace`
bundles the two sides of a joint-consistency question over one closure and
caches the coherence tables the mosaic engine needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .dlcore import (
    EMPTY, Concept, Dialect, Name, Nominal, Ontology, Role, RoleHierarchy, Signature,
    XiClosure,
)
from .typespace import DEFAULT_MAX_CLOSURE, TypeSpace, bits

__all__ = [
    "XiType", "Mosaic", "PairSpace", "role_entails", "type_coherent", "pair_coherent",
    "candidate_types",
]


@dataclass(frozen=True)
class XiType:
    id: int
    mask: int
    members: frozenset

    @classmethod
    def from_space(cls, ts: TypeSpace, ti: int) -> "XiType":
        return cls(ti, ts.types[ti], frozenset(ts.type_concepts(ti)))

    def __contains__(self, c: Concept) -> bool:
        return c in self.members


class Mosaic(NamedTuple):
    """Type sets of side 1 and side 2 as bitmasks."""

    t1: int
    t2: int

    def side(self, i: int) -> int:
        return self.t1 if i == 1 else self.t2

    def __bool__(self):
        return bool(self.t1 or self.t2)

    def le(self, other: "Mosaic") -> bool:
        return not (self.t1 & ~other.t1) and not (self.t2 & ~other.t2)

    def minus(self, d1: int, d2: int) -> "Mosaic":
        return Mosaic(self.t1 & ~d1, self.t2 & ~d2)

    def ids(self):
        return list(bits(self.t1)), list(bits(self.t2))


def role_entails(ontology: Ontology, r: Role, s: Role, inverse: bool = True) -> bool:
    """True iff ``ontology`` entails ``r ⊑ s`` (RIs only)."""
    if r.is_universal or s.is_universal:
        raise ValueError("role entailment is not defined for the universal role")
    return RoleHierarchy(ontology, inverse=inverse).entails(r, s)


def type_coherent(ts: TypeSpace, t1: int, t2: int, r: Role) -> bool:
    """``t1 ⇝_r t2`` for type ids of ``ts`` under its ontology."""
    return ts.coherent(t1, t2, r)


def candidate_types(closure: XiClosure, dialect: Dialect | None = None,
                    max_closure: int = DEFAULT_MAX_CLOSURE) -> list:
    """All types over ``closure`` realizable in some interpretation."""
    dialect = dialect or Dialect(True, True, True, True)
    ts = TypeSpace(closure, EMPTY, dialect, max_closure=max_closure)
    return [XiType.from_space(ts, ti) for ti in bits(ts.realizable())]


def pair_coherent(ps: "PairSpace", m: Mosaic, m2: Mosaic, s: Role, full: bool = False) -> bool:
    """``m ⇝_s m2``; with ``full`` also the converse direction."""
    if not ps.forward(m, m2, s):
        return False
    return not full or ps.backward(m, m2, s)


class PairSpace:
    """Both sides of a joint-consistency question over a shared closure."""

    def __init__(self, closure: XiClosure, o1: Ontology, o2: Ontology, sigma: Signature,
                 dialect: Dialect, max_closure: int = DEFAULT_MAX_CLOSURE,
                 max_types: int | None = None):
        kw = {"max_closure": max_closure}
        if max_types is not None:
            kw["max_types"] = max_types
        self.closure = closure
        self.sigma = sigma
        self.dialect = dialect
        self.ontologies = {1: o1, 2: o2}
        first = TypeSpace(closure, o1, dialect, **kw)
        # definability questions use one ontology on both sides
        self.spaces = {1: first, 2: first if o2 == o1 else TypeSpace(closure, o2, dialect, **kw)}
        names = [Role(r) for r in sorted(sigma.roles)]
        if dialect.inverse:
            names += [r.inverse() for r in names]
        self.sigma_roles = names
        idx = closure.index
        self.cell_bits = 0
        for a in sigma.concepts:
            if Name(a) in idx:
                self.cell_bits |= 1 << idx[Name(a)]
        for a in sigma.individuals:
            if Nominal(a) in idx:
                self.cell_bits |= 1 << idx[Nominal(a)]
        self._supers: dict = {}
        self._fail: dict = {}
        self._image: dict = {}
        self._pairs: dict = {}

    def ts(self, i: int) -> TypeSpace:
        return self.spaces[i]

    def cell(self, i: int, ti: int) -> int:
        return self.spaces[i].types[ti] & self.cell_bits

    def sigma_supers(self, i: int, r: Role) -> tuple:
        """Σ-roles s (with inverses in inverse dialects) entailed above ``r`` on side i."""
        key = (i, r)
        out = self._supers.get(key)
        if out is None:
            if r.is_universal:
                out = ()
            else:
                sup = self.spaces[i].supers(r)
                out = tuple(s for s in self.sigma_roles if s in sup)
            self._supers[key] = out
        return out

    def fail(self, j: int, s: Role, target: int) -> int:
        """Side-j types with no s-coherent partner in ``target``."""
        key = (j, s, target)
        out = self._fail.get(key)
        if out is None:
            ts = self.spaces[j]
            succ = ts.succ(s)
            out = 0
            for ti in range(len(ts.types)):
                if not succ[ti] & target:
                    out |= 1 << ti
            self._fail[key] = out
        return out

    def image(self, j: int, s: Role, source: int) -> int:
        """Side-j types reachable by s-coherence from some type in ``source``."""
        key = (j, s, source)
        out = self._image.get(key)
        if out is None:
            succ = self.spaces[j].succ(s)
            out = 0
            for ti in bits(source):
                out |= succ[ti]
            self._image[key] = out
        return out

    def forward(self, m: Mosaic, m2: Mosaic, s: Role) -> bool:
        return not (m.t1 & self.fail(1, s, m2.t1)) and not (m.t2 & self.fail(2, s, m2.t2))

    def backward(self, m: Mosaic, m2: Mosaic, s: Role) -> bool:
        return (not (m2.t1 & ~self.image(1, s, m.t1))
                and not (m2.t2 & ~self.image(2, s, m.t2)))

    def fail_pair(self, i: int, r: Role, target: Mosaic) -> Mosaic:
        """Types of a source mosaic that break forward coherence with
        ``target`` for some Σ super-role of ``r`` on side i."""
        key = (i, r, target)
        out = self._pairs.get(key)
        if out is None:
            d1 = d2 = 0
            for s in self.sigma_supers(i, r):
                d1 |= self.fail(1, s, target.t1)
                d2 |= self.fail(2, s, target.t2)
            out = self._pairs[key] = Mosaic(d1, d2)
        return out
