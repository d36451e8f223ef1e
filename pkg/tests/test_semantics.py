import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlnom.dlcore import (
    ALCIO, ALCO, EMPTY, TOP, Dialect, Exists, Nominal, Role, Signature, parse_concept,
)
from dlnom.semantics import (
    BisimRelation, Interpretation, UninterpretedName, bisimulation_product, disjoint_union,
    eval_concept, generated_sub, is_bisimulation, is_model, largest_bisimulation, pull_back,
)
from strategies import interpretations

ALCIO_U = Dialect(True, False, True, True)
ALL = [ALCO, ALCIO, Dialect(True, True, False, True), ALCIO_U]


def test_eval_concept_on_small_model(small_model):
    assert eval_concept(small_model, Nominal("a")) == {"c"}
    assert eval_concept(small_model, TOP) == {"c", "d"}
    assert eval_concept(small_model, Exists(Role("r"), Nominal("a"))) == {"c", "d"}
    assert eval_concept(small_model, parse_concept("exists r- not {a}")) == {"c"}
    assert eval_concept(small_model, parse_concept("exists u {a}")) == {"c", "d"}


def test_eval_uninterpreted_nominal(small_model):
    with pytest.raises(UninterpretedName):
        eval_concept(small_model, Nominal("b"))


def test_is_model(small_model, o1):
    assert is_model(small_model, o1) == (True, [])
    assert is_model(small_model, EMPTY)[0]
    looped = Interpretation(small_model.domain, small_model.concepts,
                            {"r": small_model.roles["r"] | {("d", "d")}},
                            small_model.individuals)
    ok, failing = is_model(looped, o1)
    assert not ok and failing


def test_largest_bisimulation_examples(small_model):
    full = {(x, y) for x in "cd" for y in "cd"}
    rel = largest_bisimulation(small_model, small_model, Signature({"A"}, {"r"}), ALCIO_U)
    assert rel.pairs == full
    assert largest_bisimulation(small_model, small_model, Signature(), ALCO).pairs == full
    rel = largest_bisimulation(small_model, small_model, Signature({"A"}, {"r"}, {"a"}), ALCO)
    assert rel.pairs == {("c", "c"), ("d", "d")}


def test_universal_totality_empties_relation():
    i = Interpretation(("x",), {"A": {"x"}})
    j = Interpretation(("y", "z"), {"A": {"y"}})
    sig = Signature({"A"})
    assert largest_bisimulation(i, j, sig, ALCO).pairs == {("x", "y")}
    assert largest_bisimulation(i, j, sig, Dialect(True, False, False, True)).pairs == set()


def test_inverse_roles_refine():
    # x has an incoming edge, y does not
    i = Interpretation(("p", "x"), {}, {"r": {("p", "x")}})
    j = Interpretation(("y",), {}, {})
    sig = Signature(roles={"r"})
    assert ("x", "y") in largest_bisimulation(i, j, sig, ALCO)
    assert ("x", "y") not in largest_bisimulation(i, j, sig, ALCIO)


def test_generated_sub():
    chain = Interpretation(("x", "y", "z"), {}, {"r": {("x", "y"), ("y", "z")}})
    sub, d = generated_sub(chain, "y", Signature(roles={"r"}))
    assert set(sub.domain) == {"y", "z"} and d == "y"
    assert set(generated_sub(chain, "y", Signature())[0].domain) == {"y"}
    ex = Interpretation(("a", "b"), {"B": {"b"}}, {"r": {("b", "a")}}, {"a": "a", "b": "b"})
    sub, _ = generated_sub(ex, "b", Signature({"B"}, {"r"}, {"a", "b"}))
    assert set(sub.domain) == {"a", "b"}


def test_product_of_identity_is_a_copy(small_model):
    sig = Signature({"A"}, {"r"}, {"a"})
    ident = BisimRelation(frozenset((x, x) for x in small_model.domain), sig, ALCO)
    prod, p1, p2 = bisimulation_product(small_model, small_model, ident)
    assert len(prod.domain) == 2
    assert prod.individuals["a"] == ("c", "c")
    assert len(prod.roles["r"]) == 3


def test_product_of_full_relation(small_model):
    sig = Signature({"A"}, {"r"})
    rel = largest_bisimulation(small_model, small_model, sig, ALCO)
    prod, p1, p2 = bisimulation_product(small_model, small_model, rel)
    r = small_model.roles["r"]
    assert len(prod.domain) == 4
    assert prod.concepts["A"] == set(prod.domain)
    assert prod.roles["r"] == {((x, y), (x2, y2)) for x, x2 in r for y, y2 in r}
    for proj in (p1, p2):
        graph = {(p, proj[p]) for p in prod.domain}
        assert graph <= largest_bisimulation(prod, small_model, sig, ALCO).pairs
    lifted = pull_back(prod, p1, small_model, ["A"])
    assert lifted.concepts["A"] == set(prod.domain)


def test_product_rejects_non_bisimulation(small_model):
    sig = Signature({"A"}, {"r"}, {"a"})
    bad = BisimRelation(frozenset({("c", "d")}), sig, ALCO)
    with pytest.raises(ValueError):
        bisimulation_product(small_model, small_model, bad)


def test_disjoint_union_and_json(small_model):
    u = disjoint_union(small_model, small_model)
    assert len(u.domain) == 4
    assert Interpretation.from_json(small_model.to_json()).to_json() == small_model.to_json()
    assert "digraph" in small_model.to_dot(highlight=["c"])


@settings(max_examples=60, deadline=None)
@given(interpretations(), st.sampled_from(ALL))
def test_self_bisimulation_is_an_equivalence(i, dialect):
    sig = Signature({"A", "B"}, {"r"}, {"a"})
    rel = largest_bisimulation(i, i, sig, dialect).pairs
    assert all((x, x) in rel for x in i.domain)
    assert all((y, x) in rel for x, y in rel)
    assert all((x, z) in rel for x, y in rel for y2, z in rel if y == y2)


@settings(max_examples=60, deadline=None)
@given(interpretations(), interpretations(), st.sampled_from(ALL))
def test_largest_is_a_bisimulation_and_sigma_monotone(i, j, dialect):
    big = Signature({"A", "B"}, {"r", "s"}, {"a"})
    small = Signature({"A"}, {"r"})
    rel = largest_bisimulation(i, j, big, dialect)
    if rel.pairs:
        assert is_bisimulation(i, j, rel.pairs, big, dialect)
    assert rel.pairs <= largest_bisimulation(i, j, small, dialect).pairs
