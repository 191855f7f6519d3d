import pytest

from condrsa import (
    Conditional,
    Conjunction,
    Likely,
    Lit,
    Literal,
    UtteranceType,
    Var,
    parse_utterance,
)


def test_kinds():
    assert Literal(Lit(Var.A)).kind is UtteranceType.LITERAL
    assert Likely(Lit(Var.C, False)).kind is UtteranceType.LIKELY
    assert Conjunction(Lit(Var.A), Lit(Var.C)).kind is UtteranceType.CONJUNCTION
    assert Conditional(Lit(Var.A), Lit(Var.C)).kind is UtteranceType.CONDITIONAL


def test_two_place_forms_need_distinct_variables():
    with pytest.raises(ValueError):
        Conjunction(Lit(Var.A), Lit(Var.A, False))
    with pytest.raises(ValueError):
        Conditional(Lit(Var.C), Lit(Var.C))


def test_equality_distinguishes_kind():
    assert Literal(Lit(Var.A)) != Likely(Lit(Var.A))
    assert Conditional(Lit(Var.A), Lit(Var.C)) != Conditional(Lit(Var.C), Lit(Var.A))


@pytest.mark.parametrize(
    "text",
    ["A", "~A", "likely C", "likely ~A", "A & C", "~A & ~C", "A -> C", "~C -> A"],
)
def test_parse_format_round_trip(text):
    assert str(parse_utterance(text)) == text


def test_parse_custom_names():
    names = {Var.A: "E", Var.C: "S"}
    u = parse_utterance("E -> ~S", names)
    assert u == Conditional(Lit(Var.A), Lit(Var.C, False))
    assert u.format(names) == "E -> ~S"
    assert str(u) == "A -> ~C"


def test_parse_accepts_not_keyword_and_whitespace():
    assert parse_utterance("  not A ") == Literal(Lit(Var.A, False))
    assert parse_utterance("likely  not  C") == Likely(Lit(Var.C, False))


def test_parse_rejects_unknown_variable():
    with pytest.raises(ValueError, match="unknown variable"):
        parse_utterance("B -> C")


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_utterance("A -> ")
    with pytest.raises(ValueError):
        parse_utterance("")


def test_lit_event_and_negation():
    lit = Lit(Var.A, False)
    assert lit.negated() == Lit(Var.A, True)
    worlds = lit.event().worlds
    assert all(not w.a_true for w in worlds)
