import pytest

from dlnom.dlcore import (
    ALCH, ALCO, CI, EMPTY, RI, TOP, And, Dialect, DialectError, Exists, Name, Nominal, Not,
    Ontology, ParseError, Role, Signature, UNIVERSAL, neg, ontology_to_text, parse_concept,
    parse_ontology, rename_outside, require_dialect, signature, subconcepts, to_text, validate_dialect,
    xi_closure,
)

A, B = Name("A"), Name("B")
r = Role("r")


def test_parse_ci_with_nominals():
    o = parse_ontology("{a} sub exists r {a}")
    assert o.cis == (CI(Nominal("a"), Exists(r, Nominal("a"))),)


def test_parse_ri():
    o = parse_ontology("r sub r1")
    assert o.ris == (RI(r, Role("r1")),)


def test_parse_empty_and_comments():
    assert len(parse_ontology("")) == 0
    assert len(parse_ontology("# nothing here\n\n")) == 0


def test_sugar_is_eliminated():
    c = parse_concept("(forall r (A or B) -> bot)")
    kinds = {type(s).__name__ for s in subconcepts(c)}
    assert kinds <= {"Top", "Name", "Nominal", "Not", "And", "Exists"}


def test_double_inverse_normalizes():
    assert Role("r", True).inverse() == r
    assert UNIVERSAL.inverse() == UNIVERSAL
    assert not Role("u", True).inverted


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as e:
        parse_ontology("A sub B\nA sub (B and")
    assert "line 2" in str(e.value)
    with pytest.raises(ParseError):
        parse_concept("A and B")


def test_parse_rejects_constructs_outside_dialect():
    with pytest.raises(ParseError, match="inverse"):
        parse_ontology("A sub exists r- B", ALCO)
    with pytest.raises((ParseError, DialectError)):
        parse_ontology("{a} sub A", ALCH)


@pytest.mark.parametrize("text", [
    "{a} sub exists r {a}",
    "(A and not {a}) sub not exists r not (not {a} and not A)",
    "r sub s-",
    "exists u B sub top",
])
def test_round_trip(text):
    o = parse_ontology(text)
    assert parse_ontology(ontology_to_text(o)) == o


def test_signature_examples(o1):
    assert signature(o1) == Signature({"A"}, {"r"}, {"a"})
    assert signature(TOP) == Signature()
    assert signature(Exists(UNIVERSAL, B)) == Signature({"B"})


def test_signature_text_round_trip():
    s = Signature.parse("C:A R:r I:a")
    assert Signature.parse(s.to_text()) == s
    with pytest.raises(ParseError):
        Signature.parse("R:u")
    with pytest.raises(ParseError):
        Signature.parse("X:foo")


def test_closure_small_examples():
    assert set(xi_closure(EMPTY, EMPTY, A, A)) == {A, Not(A)}
    ex = Exists(r, A)
    assert set(xi_closure(EMPTY, EMPTY, ex, B)) == {ex, Not(ex), A, Not(A), B, Not(B)}


def test_closure_of_o1(o1):
    cl = xi_closure(o1, o1, Nominal("a"), Not(Nominal("a")))
    for c in (Nominal("a"), Exists(r, Nominal("a")), A):
        assert c in cl and neg(c) in cl
    for ax in o1.cis:
        assert ax.lhs in cl and ax.rhs in cl


def test_closure_is_idempotent_and_stable(o1):
    cl = xi_closure(o1, o1, Nominal("a"), Not(Nominal("a")))
    again = xi_closure(EMPTY, EMPTY, *cl.members[:2], extra=cl.members)
    assert again.members == cl.members
    assert cl.serialize() == xi_closure(o1, o1, Nominal("a"), Not(Nominal("a"))).serialize()


def test_closure_collapses_double_negation():
    cl = xi_closure(EMPTY, EMPTY, Not(Not(A)), TOP)
    assert Not(Not(A)) not in cl or neg(Not(Not(A))) in cl
    assert all(neg(c) in cl for c in cl)


def test_rename_outside_examples(o1):
    renamed, ren = rename_outside(And(A, B), Signature({"A"}))
    assert renamed == And(A, Name("B'"))
    assert ren.table() == {"B": "B'"}
    o, ren = rename_outside(o1, Signature({"A"}, {"r"}))
    assert ren.table() == {"a": "a'"}
    assert signature(o) == Signature({"A"}, {"r"}, {"a'"})
    assert rename_outside(TOP, Signature())[0] == TOP


def test_rename_outside_avoids_existing_primes():
    c = And(A, Name("A'"))
    renamed, ren = rename_outside(c, Signature({"A'"}))
    assert ren.table() == {"A": "A''"}
    assert renamed == And(Name("A''"), Name("A'"))


def test_validate_dialect_examples(o1, o2):
    v = validate_dialect(o1, ALCH)
    assert [x.construct for x in v] == ["nominal"]
    assert validate_dialect(o2, ALCH) == []
    v = validate_dialect(Exists(UNIVERSAL, A), ALCO)
    assert [x.construct for x in v] == ["universal role"]
    require_dialect(Dialect(True, False, False, True), Exists(UNIVERSAL, A))


def test_dialect_names():
    assert Dialect.from_name("alco^u") == Dialect(True, False, False, True)
    assert Dialect.from_name("ALCHIO").name == "ALCHIO"
    with pytest.raises(ValueError):
        Dialect(False, False)
    with pytest.raises(ValueError):
        Dialect.from_name("alc")


def test_ontology_union_dedupes(o1):
    assert len(o1 | o1) == len(o1)
    assert isinstance(o1 | Ontology(), Ontology)
