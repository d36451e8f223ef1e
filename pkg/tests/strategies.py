"""Hypothesis strategies for small interpretations, concepts and ontologies."""

from hypothesis import strategies as st

from dlnom.dlcore import (
    CI, RI, TOP, And, Exists, Name, Nominal, Not, Ontology, Role, UNIVERSAL,
)
from dlnom.semantics import Interpretation

CONCEPT_NAMES = ("A", "B", "E")
ROLE_NAMES = ("r", "s")
INDIVIDUALS = ("a",)


@st.composite
def interpretations(draw, max_size=4, concepts=CONCEPT_NAMES, roles=ROLE_NAMES,
                    individuals=INDIVIDUALS):
    n = draw(st.integers(1, max_size))
    dom = [f"e{i}" for i in range(n)]
    elem = st.sampled_from(dom)
    cext = {a: draw(st.sets(elem)) for a in concepts}
    rext = {r: draw(st.sets(st.tuples(elem, elem), max_size=n * n)) for r in roles}
    inds = {a: draw(elem) for a in individuals}
    return Interpretation(tuple(dom), cext, rext, inds)


def roles(dialect, names=ROLE_NAMES):
    out = [Role(r) for r in names]
    if dialect.inverse:
        out += [Role(r, True) for r in names]
    if dialect.universal:
        out.append(UNIVERSAL)
    return st.sampled_from(out)


def concepts(dialect, names=CONCEPT_NAMES, role_names=ROLE_NAMES, individuals=INDIVIDUALS,
             max_leaves=6):
    atoms = [st.just(TOP)] + [st.just(Name(a)) for a in names]
    if dialect.nominals:
        atoms += [st.just(Nominal(a)) for a in individuals]
    base = st.one_of(*atoms)
    role = roles(dialect, role_names)

    def extend(inner):
        return st.one_of(
            inner.map(Not),
            st.tuples(inner, inner).map(lambda p: And(*p)),
            st.tuples(role, inner).map(lambda p: Exists(*p)),
        )
    return st.recursive(base, extend, max_leaves=max_leaves)


@st.composite
def ontologies(draw, dialect, max_axioms=3, names=CONCEPT_NAMES, role_names=ROLE_NAMES,
               individuals=INDIVIDUALS, max_leaves=4):
    c = concepts(dialect, names, role_names, individuals, max_leaves)
    cis = draw(st.lists(st.tuples(c, c).map(lambda p: CI(*p)), max_size=max_axioms))
    ris = []
    if dialect.role_hierarchy:
        named = [Role(r) for r in role_names]
        if dialect.inverse:
            named += [Role(r, True) for r in role_names]
        ri = st.tuples(st.sampled_from(named), st.sampled_from(named)).map(lambda p: RI(*p))
        ris = draw(st.lists(ri, max_size=1))
    return Ontology(cis, ris)
