import pytest

from dlnom.dlcore import (
    ALCIO, ALCO, BOTTOM, EMPTY, TOP, Name, Nominal, Not, Signature, concept_size, parse_concept,
    parse_ontology, role_depth,
)
from dlnom.mosaic import JointProblem, validate_witness
from dlnom.oracles import (
    SearchBudget, bounded_joint_consistency, enumerate_definitions, sigma_concepts,
)

A = Name("A")
SPY_DEF = parse_concept("exists suspects (Spy and exists deceives- not Spy)")


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(max_domain=0)
    with pytest.raises(ValueError):
        SearchBudget(max_candidates=0)


def test_bounded_finds_o1_witness(o1):
    sigma = Signature({"A"}, {"r"})
    r = bounded_joint_consistency(o1, Nominal("a"), o1, Not(Nominal("a")), sigma, ALCO,
                                  SearchBudget(max_domain=2))
    assert r.found
    pb = JointProblem(o1, Nominal("a"), o1, Not(Nominal("a")), sigma, ALCO)
    assert validate_witness(pb, r.witness) == []


def test_bounded_exhausts_on_bottom():
    for n in (1, 2, 3):
        r = bounded_joint_consistency(EMPTY, BOTTOM, EMPTY, TOP, Signature(), ALCO,
                                      SearchBudget(max_domain=n))
        assert not r.found and r.exhausted == "domain bound"


def test_bounded_respects_atoms():
    assert not bounded_joint_consistency(EMPTY, A, EMPTY, Not(A), Signature({"A"}), ALCO).found
    assert bounded_joint_consistency(EMPTY, A, EMPTY, Not(A), Signature({"B"}), ALCO).found


def test_bounded_result_is_first_in_size_order():
    r = bounded_joint_consistency(EMPTY, parse_concept("exists r A"), EMPTY, TOP,
                                  Signature({"A"}, {"r"}), ALCO)
    assert r.found and sum(r.sizes) == 2


def test_enumeration_recovers_spy_definition(spy):
    sigma = Signature({"Spy"}, {"suspects", "deceives"})
    r = enumerate_definitions(spy, Nominal("d2"), sigma, ALCIO, SearchBudget(max_depth=2))
    assert r.found and r.concept == SPY_DEF


def test_enumeration_trivial_definition():
    o = parse_ontology("A sub B\nB sub A")
    r = enumerate_definitions(o, A, Signature({"B"}), ALCO, SearchBudget(max_depth=0))
    assert r.found and r.concept == Name("B")


def test_enumeration_exhausts_on_o1(o1):
    sigma = Signature({"A"}, {"r"})
    for depth in (0, 1, 2):
        r = enumerate_definitions(o1, Nominal("a"), sigma, ALCO, SearchBudget(max_depth=depth),
                                  max_size=7)
        assert not r.found and r.exhausted == "grammar exhausted"


def test_enumeration_budget_is_reported(spy):
    sigma = Signature({"Spy"}, {"suspects", "deceives"})
    r = enumerate_definitions(spy, Nominal("d2"), sigma, ALCIO,
                              SearchBudget(max_depth=2, max_candidates=10))
    assert not r.found and r.exhausted == "candidate budget"


def test_sigma_concepts_are_ordered_and_bounded():
    sigma = Signature({"A"}, {"r"})
    cs = list(sigma_concepts(sigma, ALCIO, depth=2, max_size=6))
    sizes = [concept_size(c) for c in cs]
    assert sizes == sorted(sizes)
    assert all(role_depth(c) <= 2 for c in cs)
    assert len(set(cs)) == len(cs)
    assert parse_concept("exists r- A") in cs
    assert not any("u" == getattr(getattr(c, "role", None), "name", None) for c in cs)
