import pytest
from hypothesis import given, strategies as st

from perijac.errors import ExponentError, ParseError, UnknownVariableError
from perijac.exprparser import identifiers, parse, parse_ast, render
from perijac.numeric import GF, ZZ, Zmod
from perijac.polynomial import Poly

from strategies import VARS, polys


def test_parse_examples():
    f = parse("x^2 - 5", ["x"])
    assert dict(f.terms) == {(2,): 1, (0,): -5}
    g = parse("(x+y)^3", ["x", "y"])
    assert dict(g.terms) == {(3, 0): 1, (2, 1): 3, (1, 2): 3, (0, 3): 1}


@pytest.mark.parametrize(
    "src,exc",
    [
        ("x^-1", ExponentError),
        ("x^y", ExponentError),
        ("x^", ExponentError),
        ("w + 1", UnknownVariableError),
        ("", ParseError),
        ("2x", ParseError),
        ("(x + 1", ParseError),
        ("x + * y", ParseError),
        ("1.5*x", ParseError),
    ],
)
def test_parse_errors(src, exc):
    with pytest.raises(exc):
        parse(src, ["x", "y"])


def test_error_offset():
    with pytest.raises(ParseError) as info:
        parse("x + $", ["x"])
    assert info.value.offset == 4


def test_precedence():
    v = ["x"]
    assert parse("-x^2", v) == -parse("x^2", v)
    assert parse("2^3^2", v).constant_term() == 512
    assert parse("1 - 2 - 3", v).constant_term() == -4
    assert parse("--x", v) == parse("x", v)
    assert parse("2*-x", v) == parse("-2*x", v)
    assert parse("(-x)^2", v) == parse("x^2", v)


def test_ast_shape():
    node = parse_ast("x - y*z")
    assert node.kind == "sub"
    assert node.children[1].kind == "mul"
    assert parse_ast("a^2^3").children[0].kind == "var"


def test_big_literals_and_rings():
    big = 10**50 + 7
    assert parse(str(big), []).constant_term() == big
    assert parse("x + 7", ["x"], GF(7)) == Poly.variable("x", GF(7), ["x"])
    assert parse("-1", ["x"], Zmod(8)).constant_term() == 7


def test_render_examples():
    assert render(parse("x^2 - 5", ["x"])) == "x^2 - 5"
    assert render(Poly.zero(ZZ, ["x"])) == "0"
    assert render(parse("1*x*y", ["x", "y"])) == "x*y"


def test_identifiers_in_order():
    assert identifiers("b*a + c1_ - a^2") == ["b", "a", "c1_"]


@given(polys(ZZ, coeffs=st.integers(-10**20, 10**20)))
def test_round_trip_zz(f):
    assert parse(render(f), VARS) == f


@given(polys(GF(7)))
def test_round_trip_fp(f):
    assert parse(render(f), VARS, GF(7)) == f
