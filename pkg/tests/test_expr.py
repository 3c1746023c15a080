from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import poly
from riordanlab.errors import ConstantTermNotOne, EvaluationError, ExprSyntaxError, UnknownIdentifier
from riordanlab.expr import (
    BUILTINS,
    Add,
    Builtin,
    Div,
    Mul,
    Neg,
    Pow,
    Rational,
    Sqrt,
    Sub,
    Var,
    evaluate,
    parse,
    to_text,
)
from riordanlab.fields import C64
from riordanlab.series import equal, mul

X = Var()


def R(p, q=1):
    return Rational(Q(p, q))


def test_precedence():
    assert parse("1+2*x") == Add(R(1), Mul(R(2), X))
    assert parse("-x^2") == Neg(Pow(X, 2))
    assert parse("-x*x") == Mul(Neg(X), X)
    assert parse("1-x-x") == Sub(Sub(R(1), X), X)
    assert parse("x/2/3") == Div(Div(X, R(2)), R(3))
    assert parse(" ( x ) ") == X


def test_rational_literals():
    assert parse("2/3") == R(2, 3)
    assert parse("2/3*x") == Mul(R(2, 3), X)
    assert parse("2/3^2") == Div(R(2), Pow(R(3), 2))
    assert parse("x/2/3") != Div(X, R(2, 3))
    assert parse("1/(1-x)") == Div(R(1), Sub(R(1), X))


def test_builtins_and_sqrt():
    assert parse("catalan") == Builtin("catalan")
    assert parse("sqrt(1-4*x)") == Sqrt(Sub(R(1), Mul(R(4), X)))
    assert set(BUILTINS) == {"pascal_g", "pascal_f", "aigner_g", "catalan"}


@pytest.mark.parametrize(
    "text, offset",
    [("1+", 2), ("(1+x", 4), ("x^y", 2), ("x $ 1", 2), ("1/0", 2), ("x)", 1), ("", 0), ("é+", 0), ("\u00a0#", 2)],
)
def test_syntax_errors_carry_byte_offsets(text, offset):
    with pytest.raises(ExprSyntaxError) as exc:
        parse(text)
    assert exc.value.offset == offset


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as exc:
        parse("1 + y")
    assert exc.value.ident == "y" and exc.value.offset == 4


def test_evaluation_examples():
    assert evaluate("1/(1-x)", 6) == poly([1] * 7, 6)
    assert list(evaluate("aigner_g", 8).coeffs) == [1, 1, 1, 2, 4, 9, 21, 51, 127]
    assert list(evaluate("catalan", 7).coeffs) == [1, 1, 2, 5, 14, 42, 132, 429]
    assert evaluate("x + x^2", 5) == poly([0, 1, 1], 5)
    assert evaluate("pascal_f", 4) == poly([0, 1, 1, 1, 1], 4)
    assert evaluate("2/3*x - -1", 3) == poly([1, Q(2, 3)], 3)
    assert evaluate("(1+x)^0", 3) == poly([1], 3)


def test_evaluation_keeps_degree_through_cancellation():
    s = evaluate("(x^3 + x^5)/x^3", 10)
    assert s.deg == 10 and s == poly([1, 0, 1], 10)
    s = evaluate("(1-sqrt(1-4*x))/(2*x)", 12)
    assert s.deg == 12


def test_sqrt_normalization():
    assert evaluate("sqrt(4+4*x)", 6) == evaluate("2*sqrt(1+x)", 6)
    with pytest.raises(ConstantTermNotOne):
        evaluate("sqrt(2+x)", 4)
    with pytest.raises(EvaluationError):
        evaluate("1/x", 4)


def test_complex_evaluation():
    a = evaluate("sqrt(2+x)", 6, field=C64, tol=1e-12)
    assert equal(mul(a, a), evaluate("2+x", 6, field=C64), 1e-12)


def test_evaluation_is_deterministic():
    t = "aigner_g*(1-x)^3/(1+2*x)"
    assert evaluate(t, 10) == evaluate(parse(t), 10)


# -- round trip -------------------------------------------------------------
rationals = st.fractions(min_value=0, max_value=20, max_denominator=9).map(Rational)
leaves = st.one_of(rationals, st.just(X), st.sampled_from(sorted(BUILTINS)).map(Builtin))


def _extend(children):
    return st.one_of(
        st.builds(Add, children, children),
        st.builds(Sub, children, children),
        st.builds(Mul, children, children),
        st.builds(Div, children, children),
        st.builds(Neg, children),
        st.builds(Pow, children, st.integers(0, 4)),
        st.builds(Sqrt, children),
    )


asts = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(asts)
def test_print_parse_round_trip(node):
    assert parse(to_text(node)) == node


def test_printer_examples():
    assert to_text(parse("1/(1-x)")) == "1/(1 - x)"
    assert to_text(Div(X, R(2, 3))) == "x/(2/3)"
    assert to_text(Div(Div(X, R(2)), R(3))) == "x/(2)/(3)"
    assert to_text(Pow(R(2, 3), 2)) == "(2/3)^2"
    assert to_text(Neg(Neg(X))) == "--x"
