import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlnom.coherence import (
    Mosaic, PairSpace, candidate_types, pair_coherent, role_entails, type_coherent,
)
from dlnom.dlcore import (
    ALCH, ALCIO, ALCO, EMPTY, UNIVERSAL, Dialect, Name, Nominal, Not, Role, Signature,
    parse_concept, parse_ontology, xi_closure,
)
from dlnom.semantics import eval_concept
from dlnom.typespace import TypeSpace
from strategies import concepts, interpretations

r, r1 = Role("r"), Role("r1")


def test_role_entails(o2):
    assert role_entails(o2, r, r1)
    assert not role_entails(o2, r1, r)
    assert role_entails(EMPTY, r, r)
    chain = parse_ontology("r sub s\ns sub t")
    assert role_entails(chain, r, Role("t"))
    assert role_entails(chain, r.inverse(), Role("t", True))
    assert not role_entails(chain, r.inverse(), Role("t", True), inverse=False)
    with pytest.raises(ValueError):
        role_entails(chain, UNIVERSAL, r)


def test_type_coherence_examples(o2):
    ex = parse_concept("exists r1 A")
    cl = xi_closure(o2, o2, ex, Name("A"))
    ts = TypeSpace(cl, o2, ALCH)
    t1 = ts.member_mask(Not(ex))
    t2 = ts.member_mask(Name("A"))
    assert t1 and t2
    for a in range(len(ts.types)):
        for b in range(len(ts.types)):
            if (t1 >> a) & 1 and (t2 >> b) & 1:
                assert not type_coherent(ts, a, b, r)
                assert not type_coherent(ts, a, b, r1)


def test_types_without_negated_existentials_are_coherent_with_everything():
    cl = xi_closure(EMPTY, EMPTY, parse_concept("exists r A"), Name("B"))
    ts = TypeSpace(cl, EMPTY, ALCO)
    pos = ts.member_mask(parse_concept("exists r A"))
    for a in range(len(ts.types)):
        if (pos >> a) & 1:
            assert all(type_coherent(ts, a, b, r) for b in range(len(ts.types)))


def test_inverse_condition():
    back = parse_concept("not exists r- B")
    cl = xi_closure(EMPTY, EMPTY, back, Name("B"))
    ts = TypeSpace(cl, EMPTY, ALCIO)
    for a in range(len(ts.types)):
        for b in range(len(ts.types)):
            if (ts.member_mask(Name("B")) >> a) & 1 and (ts.member_mask(back) >> b) & 1:
                assert not type_coherent(ts, a, b, r)


def test_candidate_types_counts():
    assert len(candidate_types(xi_closure(EMPTY, EMPTY, Name("A"), Name("A")))) == 2
    assert len(candidate_types(xi_closure(EMPTY, EMPTY, Name("A"), Name("B")))) == 4
    types = candidate_types(xi_closure(EMPTY, EMPTY, Nominal("a"), Nominal("b")))
    assert len(types) == 4
    both = [t for t in types if Nominal("a") in t and Nominal("b") in t]
    assert len(both) == 1


def _pair_space(o, sigma, dialect, *cs):
    cl = xi_closure(o, o, *cs)
    return PairSpace(cl, o, o, sigma, dialect)


def test_pair_coherence_examples(o2):
    ex = parse_concept("exists r1 A")
    ps = _pair_space(o2, Signature(roles={"r1", "r2"}), ALCH, ex, Name("A"))
    ts = ps.ts(1)
    empty = Mosaic(0, 0)
    some = Mosaic(1, 1)
    assert pair_coherent(ps, empty, some, r1)
    src = ts.member_mask(Not(ex)) & -ts.member_mask(Not(ex))
    only_a = ts.member_mask(Name("A"))
    tgt = only_a & -only_a
    assert not pair_coherent(ps, Mosaic(src, 0), Mosaic(tgt, 0), r1)


def test_self_coherent_mosaic():
    ps = _pair_space(EMPTY, Signature({"A"}, {"r"}), ALCIO, Name("A"), Name("A"))
    m = Mosaic(ps.ts(1).all, ps.ts(2).all)
    assert pair_coherent(ps, m, m, r) and pair_coherent(ps, m, m, r, full=True)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_full_coherence_implies_forward(data):
    c = data.draw(concepts(ALCIO, names=("A",), role_names=("r",), max_leaves=3))
    ps = _pair_space(EMPTY, Signature({"A"}, {"r"}), ALCIO, c, Name("A"))
    n1, n2 = len(ps.ts(1).types), len(ps.ts(2).types)
    mask = st.tuples(st.integers(0, (1 << n1) - 1), st.integers(0, (1 << n2) - 1))
    m = Mosaic(*data.draw(mask))
    m2 = Mosaic(*data.draw(mask))
    for s in (r, r.inverse()):
        if pair_coherent(ps, m, m2, s, full=True):
            assert pair_coherent(ps, m, m2, s)


@settings(max_examples=50, deadline=None)
@given(interpretations(max_size=3, individuals=()), st.data(),
       st.sampled_from([ALCO, ALCIO, Dialect(False, True, True)]))
def test_model_edges_are_coherent(interp, data, dialect):
    cs = [data.draw(concepts(dialect, individuals=(), max_leaves=4)) for _ in range(2)]
    cl = xi_closure(EMPTY, EMPTY, *cs)
    ts = TypeSpace(cl, EMPTY, dialect)
    index = {t: i for i, t in enumerate(ts.types)}
    memo = {}
    tp = {}
    for x in interp.domain:
        mask = 0
        for k, c in enumerate(cl.members):
            if x in eval_concept(interp, c, memo):
                mask |= 1 << k
        assert mask in index
        tp[x] = index[mask]
    for name in ("r", "s"):
        for x, y in interp.roles.get(name, ()):
            assert type_coherent(ts, tp[x], tp[y], Role(name))
            if dialect.inverse:
                assert type_coherent(ts, tp[y], tp[x], Role(name, True))
