from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from mvfix.errors import EvaluationError, InputError, ParseError
from mvfix.expressions import (affine_coefficients, evaluate, parse_expression,
                               parse_rational, unparse)


def ev(text, **env):
    return evaluate(parse_expression(text, variables=tuple(env) or ("t", "s")),
                    {k: F(v) for k, v in env.items()})


def test_arithmetic_is_exact():
    assert ev("5/6*s - t", t=F(5, 6), s=1) == 0
    assert ev("1/3 + 1/6", t=0, s=0) == F(1, 2)
    assert ev("2*x - 5/3", x=F(2)) == F(7, 3)
    assert ev("min(3, s)", s=5) == 3
    assert ev("max(1/2, s)", s=F(1, 4)) == F(1, 2)
    assert ev("-t", t=F(2, 7)) == F(-2, 7)
    assert ev("0.25 * s", s=4) == 1


def test_precedence_and_parens():
    assert ev("1 - 2 - 3", t=0, s=0) == -4
    assert ev("1 - (2 - 3)", t=0, s=0) == 2
    assert ev("2 + 3 * 4", t=0, s=0) == 14
    assert ev("(2 + 3) * 4", t=0, s=0) == 20
    assert ev("-s * 2", s=3) == -6


def test_division_by_zero_raises():
    with pytest.raises(EvaluationError):
        ev("1 / s", s=0)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError):
        parse_expression("")
    with pytest.raises(ParseError):
        parse_expression("t +")
    with pytest.raises(ParseError):
        parse_expression("min(t)")
    with pytest.raises(ParseError) as err:
        parse_expression("t + y")
    assert err.value.column == 5
    with pytest.raises(ParseError):
        parse_expression("t $ s")


def test_unknown_variable_lists_allowed_names():
    with pytest.raises(ParseError, match="allowed variables"):
        parse_expression("x + 1", variables=("t", "s"))


def test_affine_extraction():
    assert affine_coefficients(parse_expression("5*x/6", ("x",))) == (F(5, 6), 0)
    assert affine_coefficients(parse_expression("2*x - 5/3", ("x",))) == (2, F(-5, 3))
    assert affine_coefficients(parse_expression("-2", ("x",))) == (0, -2)
    assert affine_coefficients(parse_expression("(1 - x) / 2", ("x",))) == (F(-1, 2), F(1, 2))
    assert affine_coefficients(parse_expression("min(1, 3)", ("x",))) == (0, 1)


@pytest.mark.parametrize("text", ["x * x", "1 / x", "min(x, 1)", "max(0, x) + 1"])
def test_non_affine_rejected(text):
    with pytest.raises(InputError):
        affine_coefficients(parse_expression(text, ("x",)))


def test_parse_rational_forms():
    assert parse_rational("5/6") == F(5, 6)
    assert parse_rational("-0.125") == F(-1, 8)
    assert parse_rational("7") == 7
    with pytest.raises(ParseError):
        parse_rational("five")
    with pytest.raises(ParseError):
        parse_rational("1/0")


_leaf = st.one_of(
    st.builds(lambda p, q: ("num", F(p, q)), st.integers(0, 40), st.integers(1, 12)),
    st.sampled_from([("var", "t"), ("var", "s")]),
)


def _node(children):
    ops = st.sampled_from(["add", "sub", "mul", "div", "min", "max"])
    return st.builds(lambda op, a, b: (op, a, b), ops, children, children) | st.builds(
        lambda a: ("neg", a), children)


_expr = st.recursive(_leaf, _node, max_leaves=12)


@given(_expr)
def test_unparse_parse_round_trip(expr):
    assert parse_expression(unparse(expr)) == expr
