"""Decision endpoints: interpolants, explicit definitions, referring
expressions, implicit and non-projective definability."""

from __future__ import annotations

from dataclasses import dataclass, field

from .dlcore import (
    CI, And, Concept, Dialect, Exists, Name, Nominal, Not, Ontology, Role, Signature,
    conj, forall, fresh_name, map_names, neg, rename_outside, require_dialect, signature,
)
from .mosaic import JointProblem, JointVerdict, solve
from .satcheck import entails_ci, satisfiable
from .typespace import DEFAULT_MAX_CLOSURE

__all__ = [
    "Decision", "interpolant_exists", "definition_exists", "referring_expression_exists",
    "implicitly_definable", "relativize", "build_beth_reduction",
    "nonprojective_definition_exists", "has_bdp",
]


@dataclass
class Decision:
    kind: str
    answer: bool
    sigma: Signature
    route: str = "mosaic"
    verdict: JointVerdict | None = None
    problem: JointProblem | None = None
    details: dict = field(default_factory=dict)


def _joint(kind, o1, c1, o2, c2, sigma, dialect, engine, order_seed, budgets) -> Decision:
    pb = JointProblem(o1, c1, o2, c2, sigma, dialect, **budgets)
    verdict = solve(pb, engine=engine, order_seed=order_seed)
    return Decision(kind, not verdict.consistent, sigma, "mosaic", verdict, pb)


def interpolant_exists(o1: Ontology, c1: Concept, o2: Ontology, c2: Concept, dialect: Dialect,
                       engine: str = "lazy", order_seed=None, **budgets) -> Decision:
    """Is there an interpolant for ``c1 ⊑ c2`` under ``o1 ∪ o2``?

    Σ is the shared signature of (o1, c1) and (o2, c2).
    """
    require_dialect(dialect, o1, c1, o2, c2)
    sigma = signature(o1, c1) & signature(o2, c2)
    o = o1 | o2
    return _joint("interpolant", o, c1, o, neg(c2), sigma, dialect, engine, order_seed, budgets)


def _check_sigma(sigma: Signature, *xs):
    extra = sigma - signature(*xs)
    if extra:
        raise ValueError(f"signature symbols not in the input: {extra.to_text()}")


def definition_exists(ontology: Ontology, c: Concept, sigma: Signature, dialect: Dialect,
                      engine: str = "lazy", order_seed=None, **budgets) -> Decision:
    """Is ``c`` explicitly definable by a Σ-concept under ``ontology``?"""
    require_dialect(dialect, ontology, c)
    _check_sigma(sigma, ontology, c)
    return _joint("definition", ontology, c, ontology, neg(c), sigma, dialect, engine,
                  order_seed, budgets)


def referring_expression_exists(ontology: Ontology, individual: str,
                                sigma: Signature | None = None, dialect: Dialect | None = None,
                                engine: str = "lazy", order_seed=None, **budgets) -> Decision:
    """Is there a Σ-concept denoting exactly ``individual`` under ``ontology``?

    Σ defaults to every symbol of the ontology except the individual.
    """
    sig = signature(ontology)
    if individual not in sig.individuals:
        raise ValueError(f"individual {individual} does not occur in the ontology")
    if sigma is None:
        sigma = sig - Signature(individuals={individual})
    if individual in sigma.individuals:
        raise ValueError(f"individual {individual} must not be in the signature")
    d = definition_exists(ontology, Nominal(individual), sigma, dialect, engine=engine,
                          order_seed=order_seed, **budgets)
    d.kind = "referring-expression"
    return d


def implicitly_definable(ontology: Ontology, c: Concept, sigma: Signature, dialect: Dialect,
                         **budgets) -> Decision:
    """Does ``ontology`` fix the extension of ``c`` once Σ is fixed?

    Checked by renaming every non-Σ symbol apart and testing the
    equivalence of ``c`` and its copy under both ontologies.  The closure
    budget applies per copy.
    """
    require_dialect(dialect, ontology, c)
    _check_sigma(sigma, ontology, c)
    (o_copy, c_copy), renaming = rename_outside((ontology, c), sigma)
    both = ontology | o_copy
    closure = 2 * budgets.get("max_closure", DEFAULT_MAX_CLOSURE)
    answer = (entails_ci(both, c, c_copy, dialect, max_closure=closure)
              and entails_ci(both, c_copy, c, dialect, max_closure=closure))
    return Decision("implicit", answer, sigma, "renaming",
                    details={"renaming": renaming.table()})


def relativize(ontology: Ontology, d: str) -> Ontology:
    """Restrict every CI to elements of the concept name ``d``."""
    if d in signature(ontology).concepts:
        raise ValueError(f"concept name {d} is not fresh")
    guard = Name(d)

    def rel(c: Concept) -> Concept:
        if isinstance(c, Not):
            return Not(rel(c.arg))
        if isinstance(c, And):
            return And(rel(c.left), rel(c.right))
        if isinstance(c, Exists):
            return Exists(c.role, And(guard, rel(c.arg)))
        return c

    cis = [CI(And(guard, rel(ax.lhs)), rel(ax.rhs)) for ax in ontology.cis]
    return Ontology(cis, ontology.ris)


def build_beth_reduction(ontology: Ontology, a: str):
    """Ontology and goal concept whose joint satisfiability refutes the
    non-projective definability of concept name ``a`` (ALCO, ALCHO).

    Returns ``(ontology, goal, names)`` where ``names`` records the fresh
    symbols introduced.
    """
    sig = signature(ontology)
    if a not in sig.concepts:
        raise ValueError(f"concept name {a} does not occur in the ontology")
    sigma = sig - Signature(concepts={a})
    taken = set(sig.names())

    def fresh(n, prime=True):
        new = fresh_name(n, taken) if prime or n in taken else n
        taken.add(new)
        return new

    a_copy = fresh(a)
    ind_copy = {b: fresh(b) for b in sorted(sig.individuals)}
    d1, d2, dom = fresh("D1", False), fresh("D2", False), fresh("D", False)
    o_copy = map_names(ontology, {a: a_copy}, {}, ind_copy)
    D = Name(dom)
    cis = []
    for r in sorted(sigma.roles):
        cis.append(CI(D, forall(Role(r), D)))
    cis += [CI(D, Name(d1)), CI(D, Name(d2))]
    for b in sorted(sigma.individuals):
        cis.append(CI(Nominal(b), Name(d1)))
    for b in sorted(sigma.individuals):
        cis.append(CI(Nominal(ind_copy[b]), Name(d2)))
    for b in sorted(sigma.individuals):
        cis.append(CI(And(D, Nominal(b)), Nominal(ind_copy[b])))
    for b in sorted(sigma.individuals):
        cis.append(CI(And(D, Nominal(ind_copy[b])), Nominal(b)))
    reduced = relativize(ontology, d1) | relativize(o_copy, d2) | Ontology(cis)
    goal = conj(Name(a), neg(Name(a_copy)), D)
    names = {"copy": a_copy, "individuals": ind_copy, "D1": d1, "D2": d2, "D": dom}
    return reduced, goal, names


def has_bdp(dialect: Dialect) -> bool:
    """Implicit definability coincides with explicit definability.

    Fails only for nominals with neither inverses nor the universal role.
    """
    return not (dialect.nominals and not dialect.inverse and not dialect.universal)


def nonprojective_definition_exists(ontology: Ontology, a: str, dialect: Dialect,
                                    route: str = "auto", engine: str = "lazy",
                                    **budgets) -> Decision:
    """Is concept name ``a`` definable using all other symbols of ``ontology``?

    ``route`` is ``auto`` (implicit definability where that suffices, the
    reduction ontology otherwise) or ``mosaic`` (the general procedure).
    """
    require_dialect(dialect, ontology)
    sig = signature(ontology)
    if a not in sig.concepts:
        raise ValueError(f"concept name {a} does not occur in the ontology")
    sigma = sig - Signature(concepts={a})
    closure = budgets.get("max_closure", DEFAULT_MAX_CLOSURE)
    if route == "mosaic":
        d = definition_exists(ontology, Name(a), sigma, dialect, engine=engine, **budgets)
        d.kind = "nonprojective"
        return d
    if route != "auto":
        raise ValueError(f"unknown route {route!r}")
    if has_bdp(dialect):
        d = implicitly_definable(ontology, Name(a), sigma, dialect, max_closure=closure)
        d.kind = "nonprojective"
        d.route = "implicit"
        return d
    reduced, goal, names = build_beth_reduction(ontology, a)
    hierarchy = Dialect(True, True, False, False)
    # the reduction holds two relativized copies of the ontology
    answer = not satisfiable(goal, reduced, hierarchy, max_closure=2 * closure)
    return Decision("nonprojective", answer, sigma, "reduction",
                    details={"fresh": names, "axioms": len(reduced)})
