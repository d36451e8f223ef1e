from hypothesis import given, settings
from hypothesis import strategies as st

from dlnom.dlcore import (
    ALCH, ALCIO, ALCO, EMPTY, TOP, And, Dialect, Exists, Name, Nominal, Not, Ontology, Role,
    Signature, neg, parse_concept, parse_ontology, xi_closure,
)
from dlnom.oracles import SearchBudget, bounded_joint_consistency
from dlnom.satcheck import entails_ci, find_model, realizable_types, satisfiable
from dlnom.semantics import eval_concept, is_model
from strategies import concepts, ontologies

A = Name("A")
D2_DEF = parse_concept("exists suspects (Spy and exists deceives- not Spy)")
DIALECTS = [ALCO, ALCIO, Dialect(True, True, False, False), Dialect(True, False, False, True)]


def test_satisfiable_examples(o1):
    assert satisfiable(TOP, EMPTY, ALCO)
    assert not satisfiable(And(A, Not(A)), EMPTY, ALCO)
    assert satisfiable(parse_concept("({a} and exists r {a})"), o1, ALCO)


def test_entailment_examples(spy, o2):
    d2 = Nominal("d2")
    assert entails_ci(spy, d2, D2_DEF, ALCIO)
    assert entails_ci(spy, D2_DEF, d2, ALCIO)
    assert entails_ci(EMPTY, A, A, ALCO)
    assert entails_ci(o2, parse_concept("exists r top"),
                      parse_concept("(exists r1 top and exists r2 top)"), ALCH)


def test_found_model_is_a_model(o1):
    c = parse_concept("(not {a} and exists r {a})")
    interp, point = find_model(c, o1, ALCO)
    assert is_model(interp, o1)[0]
    assert point in eval_concept(interp, c)
    assert find_model(And(A, Not(A)), o1, ALCO) is None


def test_nominals_are_singletons():
    lhs = parse_concept("(exists r A and exists r B)")
    rhs = parse_concept("exists r (A and B)")
    assert not entails_ci(EMPTY, lhs, rhs, ALCO)
    # both successors are the element named a
    assert entails_ci(parse_ontology("A sub {a}\nB sub {a}"), lhs, rhs, ALCO)
    assert entails_ci(parse_ontology("{a} sub A\n{a} sub B"),
                      parse_concept("exists r {a}"), rhs, ALCO)


def test_universal_role_is_global():
    u = Dialect(True, False, False, True)
    assert entails_ci(EMPTY, parse_concept("exists u A"), parse_concept("forall u exists u A"), u)
    assert not satisfiable(parse_concept("(exists u A and forall u not A)"), EMPTY, u)


def test_realizable_types_examples(o1):
    cl = xi_closure(EMPTY, EMPTY, A, A)
    ts, real = realizable_types(cl, EMPTY, ALCO)
    assert bin(real).count("1") == 2
    cl = xi_closure(o1, o1, Nominal("a"), Not(Exists(Role("r"), Nominal("a"))))
    ts, real = realizable_types(cl, o1, ALCO)
    missing = Not(Exists(Role("r"), Nominal("a")))
    assert not real & ts.member_mask(Nominal("a")) & ts.member_mask(missing)
    free, _ = realizable_types(cl, EMPTY, ALCO)
    assert free.member_mask(Nominal("a")) & free.member_mask(missing)


def test_realizable_types_match_satisfiability(o2):
    cl = xi_closure(o2, o2, parse_concept("exists r top"), parse_concept("not exists r top"))
    ts, real = realizable_types(cl, o2, ALCH)
    for ti in range(len(ts.types)):
        conj = TOP
        for c in ts.type_concepts(ti):
            conj = And(conj, c)
        assert bool((real >> ti) & 1) == satisfiable(conj, o2, ALCH)


@settings(max_examples=40, deadline=None)
@given(st.data(), st.sampled_from(DIALECTS))
def test_agrees_with_bounded_model_search(data, dialect):
    o = data.draw(ontologies(dialect, max_axioms=2))
    c = data.draw(concepts(dialect, max_leaves=4))
    sat = satisfiable(c, o, dialect)
    small = bounded_joint_consistency(o, c, EMPTY, TOP, Signature(), dialect,
                                      SearchBudget(max_domain=3))
    if small.found:
        assert sat
    if sat:
        interp, point = find_model(c, o, dialect)
        assert is_model(interp, o)[0] and point in eval_concept(interp, c)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_entailment_is_monotone_in_the_ontology(data):
    o = data.draw(ontologies(ALCO, max_axioms=2))
    extra = data.draw(ontologies(ALCO, max_axioms=1))
    c = data.draw(concepts(ALCO, max_leaves=3))
    d = data.draw(concepts(ALCO, max_leaves=3))
    if entails_ci(o, c, d, ALCO):
        assert entails_ci(o | extra, c, d, ALCO)
    assert entails_ci(o, c, d, ALCO) == (not satisfiable(And(c, neg(d)), o, ALCO))
