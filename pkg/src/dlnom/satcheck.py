"""Concept satisfiability and subsumption w.r.t. an ontology.

Decided by type elimination over the closure of the input: candidate types
are the boolean-saturated member sets respecting the CIs, a nominal is
carried by exactly one surviving type, and every existential needs a
coherent witness among the survivors.  A surviving set doubles as a model
whose domain is the set of types (see :func:`type_model`).
"""

from __future__ import annotations

from .dlcore import (
    EMPTY, And, Concept, Dialect, Name, Ontology, Role, XiClosure, neg,
    require_dialect, signature, validate_dialect, xi_closure,
)
from .semantics import Interpretation
from .typespace import DEFAULT_MAX_CLOSURE, BudgetExceeded, TypeSpace, bits

__all__ = [
    "satisfiable", "entails_ci", "realizable_types", "type_model", "find_model",
    "BudgetExceeded",
]


def _space(c: Concept, ontology: Ontology, dialect: Dialect, max_closure: int) -> TypeSpace:
    return TypeSpace(xi_closure(ontology, EMPTY, c, c), ontology, dialect,
                     max_closure=max_closure)


def find_model(c: Concept, ontology: Ontology, dialect: Dialect,
               max_closure: int = DEFAULT_MAX_CLOSURE):
    """A model of ``ontology`` with an element in ``c``, or None.

    Returns ``(interpretation, element)``.
    """
    require_dialect(dialect, ontology, c)
    ts = _space(c, ontology, dialect, max_closure)
    goal = ts.member_mask(c)
    found = ts.search(ts.all, goal=goal)
    if found is None:
        return None
    interp = type_model(ts, found)
    point = f"t{next(bits(found & goal))}"
    return interp, point


def satisfiable(c: Concept, ontology: Ontology = EMPTY, dialect: Dialect | None = None,
                max_closure: int = DEFAULT_MAX_CLOSURE) -> bool:
    """True iff some model of ``ontology`` gives ``c`` a nonempty extension."""
    dialect = dialect or _loosest(ontology, c)
    require_dialect(dialect, ontology, c)
    ts = _space(c, ontology, dialect, max_closure)
    return ts.search(ts.all, goal=ts.member_mask(c)) is not None


def entails_ci(ontology: Ontology, c: Concept, d: Concept, dialect: Dialect | None = None,
               max_closure: int = DEFAULT_MAX_CLOSURE) -> bool:
    """True iff ``ontology`` entails ``c ⊑ d``."""
    return not satisfiable(And(c, neg(d)), ontology, dialect, max_closure)


def realizable_types(closure: XiClosure, ontology: Ontology, dialect: Dialect,
                     max_closure: int = DEFAULT_MAX_CLOSURE):
    """Types over ``closure`` realized in some model of ``ontology``.

    Returns the :class:`TypeSpace` and the mask of realizable type ids.
    """
    require_dialect(dialect, ontology)
    ts = TypeSpace(closure, ontology, dialect, max_closure=max_closure)
    return ts, ts.realizable()


def type_model(ts: TypeSpace, alive: int, prefix: str = "t") -> Interpretation:
    """The interpretation whose elements are the types in ``alive``.

    Role names are interpreted by the coherence relation, so the result is a
    model of the ontology whenever ``alive`` is witness-closed and carries each
    nominal exactly once.
    """
    ids = list(bits(alive))
    dom = [f"{prefix}{i}" for i in ids]
    sig = signature(ts.ontology, list(ts.closure.members))
    concepts = {}
    for a in sorted(sig.concepts):
        k = ts.closure.index.get(Name(a))
        concepts[a] = [f"{prefix}{i}" for i in ids if k is not None and (ts.types[i] >> k) & 1]
    roles = {}
    for r in sorted(sig.roles):
        succ = ts.succ(Role(r))
        roles[r] = [[f"{prefix}{i}", f"{prefix}{j}"] for i in ids for j in bits(succ[i] & alive)]
    individuals = {}
    for a in ts.nominals:
        carriers = [i for i in ids if (ts.types[i] >> ts.nominal_member[a]) & 1]
        if len(carriers) == 1:
            individuals[a] = f"{prefix}{carriers[0]}"
    return Interpretation(dom, concepts, roles, individuals)


def _loosest(*xs) -> Dialect:
    """The smallest named dialect admitting the given inputs."""
    for u in (False, True):
        for hier, inv in ((False, False), (True, False), (False, True), (True, True)):
            d = Dialect(True, hier, inv, u)
            if not validate_dialect(list(xs), d):
                return d
    return Dialect(True, True, True, True)
