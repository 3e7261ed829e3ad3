"""Parser, printer, and translation tests."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from gens import rand_fo, rand_modal
from onevar.syntax import (
    Atom, Bin, Const, E, F, Modal, ParseError, PropAtom, Quant, Var, X,
    circle, free_vars, is_closed, is_modalized, parse_fo, parse_modal,
    render, star, substitute, subformulas,
)

Y1, Y2 = Var(1), Var(2)


def test_render_oracles():
    # precedence: -> weakest and right associative, * strongest and left
    assert render(parse_fo("P0(x) -> P1(x) -> P2(x)")) == "P0(x) -> P1(x) -> P2(x)"
    assert render(parse_fo("(P0(x) -> P1(x)) -> P2(x)")) == "(P0(x) -> P1(x)) -> P2(x)"
    assert render(parse_fo("P0(x) & P1(x) | P2(x)")) == "P0(x) & P1(x) | P2(x)"
    assert render(parse_fo("P0(x) * (P1(x) * P2(x))")) == "P0(x) * (P1(x) * P2(x))"
    assert render(parse_fo("forall x (P0(x) & P1(x))")) == "forall x (P0(x) & P1(x))"
    assert render(parse_modal("[](p0 -> []p1)")) == "[](p0 -> []p1)"
    assert render(parse_modal("<>p0 * <>p0")) == "<>p0 * <>p0"


def test_parse_errors():
    with pytest.raises(ParseError) as e:
        parse_fo("P0(x")
    assert e.value.code == "E-SYNTAX"
    with pytest.raises(ParseError) as e:
        parse_fo("forall y1 P0(y1)")
    assert e.value.code == "E-BOUND-VAR"
    with pytest.raises(ParseError) as e:
        parse_fo("forall x (P0(x) & P1(y1))")
    assert e.value.code == "E-SCOPE"


def test_fo_round_trip_seeded():
    rng = random.Random(11)
    for _ in range(400):
        phi = rand_fo(rng, rng.randint(0, 5), [X, Y1, Y2])
        assert parse_fo(render(phi)) == phi


def test_modal_round_trip_seeded():
    rng = random.Random(12)
    for _ in range(400):
        alpha = rand_modal(rng, rng.randint(0, 5))
        assert parse_modal(render(alpha)) == alpha


@given(st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_translation_inverse(seed):
    rng = random.Random(seed)
    phi = rand_fo(rng, rng.randint(0, 6), [X])
    assert circle(star(phi)) == phi
    alpha = rand_modal(rng, rng.randint(0, 6))
    assert star(circle(alpha)) == alpha


def test_translation_oracles():
    assert render(star(parse_fo("forall x P0(x)"))) == "[]p0"
    assert render(star(parse_fo("exists x (P0(x) * P1(x))"))) == "<>(p0 * p1)"
    assert render(circle(parse_modal("[]p0 -> <>p1"))) \
        == "forall x P0(x) -> exists x P1(x)"


def test_free_vars_and_substitution():
    phi = parse_fo("P0(y1) & forall x P1(x)")
    assert free_vars(phi) == {Y1}
    assert free_vars(substitute(phi, Y1, X)) == {X}
    # substitution never touches the bound variable
    assert substitute(parse_fo("forall x P0(x)"), X, Y1) \
        == parse_fo("forall x P0(x)")
    assert is_closed(parse_fo("forall x P0(x)"))
    assert not is_closed(phi)


def test_is_modalized():
    assert is_modalized(parse_modal("[]p0 * ([]p1 | <>p2)"))
    assert is_modalized(E) and is_modalized(F)
    assert not is_modalized(parse_modal("p0 & []p1"))


def test_subformulas():
    phi = parse_fo("P0(x) -> P0(x) & e")
    subs = list(subformulas(phi))
    assert parse_fo("P0(x)") in subs and E in subs and phi in subs
