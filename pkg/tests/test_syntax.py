import pytest
from hypothesis import given, strategies as st

from esakia_forge.errors import ParseError
from esakia_forge.syntax import (And, Bot, Implies, Not, Or, Top, Var,
                                 implication_rank, parse, size, to_text, variables)

p, q = Var("p"), Var("q")


def test_precedence():
    assert parse("p->q|q->p") == Implies(p, Implies(Or(q, q), p))
    assert parse("p & q | p") == Or(And(p, q), p)
    assert parse("p -> q -> p") == Implies(p, Implies(q, p))


def test_negation_sugar():
    assert parse("~~p") == Implies(Implies(p, Bot()), Bot())
    assert to_text(parse("~~p")) == "~~p"
    assert parse("¬p ∨ ⊤") == Or(Not(p), Top())


def test_lc_axiom_tree():
    assert parse("(p->q)|(q->p)") == Or(Implies(p, q), Implies(q, p))


def test_ranks():
    assert implication_rank(p) == 0
    assert implication_rank(parse("(p->q)|(q->p)")) == 1
    assert implication_rank(parse("~p | ~~p")) == 2


def test_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        parse("p -> ")
    assert e.value.position == 5
    with pytest.raises(ParseError):
        parse("p $ q")
    with pytest.raises(ParseError):
        parse("(p")


def formulas():
    atoms = st.sampled_from([Var("p"), Var("q"), Var("r"), Bot(), Top()])
    return st.recursive(atoms, lambda sub: st.one_of(
        st.builds(And, sub, sub), st.builds(Or, sub, sub), st.builds(Implies, sub, sub)),
        max_leaves=12)


@given(formulas())
def test_print_parse_round_trip(phi):
    assert parse(to_text(phi)) == phi


@given(formulas())
def test_printing_is_a_normal_form(phi):
    text = to_text(phi)
    assert to_text(parse(text)) == text


@given(formulas())
def test_size_and_variables(phi):
    assert size(phi) >= len(variables(phi))
