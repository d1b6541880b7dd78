import pytest
from hypothesis import given

from odekit import ConcreteContext, OdeCoefficients
from odekit.errors import ParseError, UnsupportedExponentError
from odekit.jets import JetVariable, instantiate, jet, jet_variables, order, total_derivative
from odekit.parse import format_expr, parse

from _support import jet_exprs, ratexprs


@given(ratexprs())
def test_format_parse_roundtrip(e):
    assert parse(format_expr(e)) == e


@given(jet_exprs())
def test_roundtrip_with_jets(e):
    assert parse(format_expr(e)) == e


def test_jet_spellings():
    assert parse("P_{0.2}") == parse("P[0,2]") == jet("P", 0, 2)
    assert parse("Q") == parse("Q[0,0]")
    assert parse("x**3") == parse("x^3")


@pytest.mark.parametrize("text,offset", [("1/(", 3), ("x + * y", 4), ("x $ y", 2), ("(x", 2)])
def test_syntax_errors_carry_position(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset


def test_exponents_must_be_integer_constants():
    with pytest.raises(UnsupportedExponentError):
        parse("x^y")
    with pytest.raises(UnsupportedExponentError):
        parse("x^(1/2)")
    assert parse("x^(4/2)") == parse("x^2")


def test_precedence():
    assert parse("-x^2") == -parse("x^2")
    assert parse("2^3^2") == parse("512")
    assert parse("a/b*c") == parse("(a/b)*c")


@given(jet_exprs())
def test_total_derivatives_commute(e):
    dx = total_derivative(total_derivative(e, "y"), "x")
    dy = total_derivative(total_derivative(e, "x"), "y")
    assert dx == dy


@given(jet_exprs())
def test_instantiate_commutes_with_derivatives(e):
    ode = OdeCoefficients.of(P="x*y", Q="y^2 - x", R="1/(1 + x^2)", S="x^3")
    ctx = ConcreteContext(ode)
    for d, cd in (("x", ctx.dx), ("y", ctx.dy)):
        try:
            lhs = instantiate(total_derivative(e, d), ode, ctx)
            rhs = cd(instantiate(e, ode, ctx))
        except ZeroDivisionError:
            continue
        assert lhs == rhs


def test_jet_bookkeeping():
    e = parse("P[2,1]*Q + x*R[0,3]")
    assert order(e) == 3
    assert [v.name for v in jet_variables(e)] == ["Q", "P[2,1]", "R[0,3]"]
    assert JetVariable.from_name("S[1,4]") == JetVariable("S", 1, 4)
    assert total_derivative(parse("P[1,0]"), "y") == parse("P[1,1]")
    assert total_derivative(parse("x*y"), "x") == parse("y")
    with pytest.raises(ValueError):
        JetVariable("T", 0, 0)
    with pytest.raises(ValueError):
        total_derivative(e, "z")
