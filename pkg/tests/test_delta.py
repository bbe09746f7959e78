import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from perijac.delta import (
    FrobeniusLift,
    PerivationMap,
    check_kummer_lemma,
    check_p_derivation_axioms,
    check_perivation,
    cp,
    delta_int,
    delta_poly,
    in_power_of_maximal_ideal,
    random_poly,
)
from perijac.errors import InvalidLiftError, InvalidModulusError
from perijac.exprparser import parse, render
from perijac.numeric import GF, ZZ, Zmod
from perijac.polynomial import Poly

from oracles import sympy_delta

XYZ = ("x", "y", "z")


def test_cp_examples():
    X, Y = (Poly.variable(v, ZZ, ("X", "Y")) for v in ("X", "Y"))
    assert render(cp(2, [X, Y])) == "-X*Y"
    assert render(cp(3, [X, Y])) == "-X^2*Y - X*Y^2"
    for p in (2, 3, 5):
        assert cp(p, [X, Poly.zero(ZZ, ("X", "Y"))]).is_zero()
        assert cp(p, [7, 0]) == 0
    with pytest.raises(ValueError):
        cp(2, [X])
    with pytest.raises(InvalidModulusError):
        cp(4, [X, Y])


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_cp_lies_in_pairwise_product_ideal(p):
    X, Y, Z = sympy.symbols("X Y Z")
    vars3 = ("X", "Y", "Z")
    two = cp(p, [Poly.variable(v, ZZ, ("X", "Y")) for v in ("X", "Y")])
    q, r = sympy.div(sympy.sympify(render(two).replace("^", "**")), X * Y, X, Y)
    assert r == 0
    three = cp(p, [Poly.variable(v, ZZ, vars3) for v in vars3])
    gb = sympy.groebner([X * Y, X * Z, Y * Z], X, Y, Z, order="grevlex")
    assert gb.reduce(sympy.sympify(render(three).replace("^", "**")))[1] == 0


def test_cp_over_truncated_ring_lands_one_level_down():
    v = ("x", "y")
    x, y = (Poly.variable(i, Zmod(8), v) for i in range(2))
    c = cp(2, [x, y])
    assert c.ring == Zmod(4)
    assert c == cp(2, [Poly.variable(i, ZZ, v) for i in range(2)]).change_ring(Zmod(4))


def test_delta_int():
    assert delta_int(2, -2) == -3
    assert delta_int(2, -5) == -15
    assert delta_int(3, 1) == 0
    for p in (2, 3, 5):
        for n in range(-30, 31):
            assert delta_int(p, n) * p == n - n**p


def test_delta_poly_examples():
    lift = FrobeniusLift.standard(2, ["x"])
    assert render(delta_poly(lift, parse("x^2 - 5", ["x"]))) == "x^2 + 1"
    for k in (1, 2, 3):
        assert delta_poly(FrobeniusLift.standard(2, ["x"], k), parse("x", ["x"])).is_zero()
    lift3 = FrobeniusLift.standard(3, ["x", "y"])
    d = delta_poly(lift3, parse("x*y - 3", ["x", "y"]))
    assert d.is_constant() and d.constant_term() == 2


def test_lift_validation():
    with pytest.raises(InvalidLiftError):
        FrobeniusLift.from_strings(2, ["x"], {"x": "x"})
    with pytest.raises(InvalidLiftError):
        FrobeniusLift.from_strings(4, ["x"])
    with pytest.raises(InvalidLiftError):
        FrobeniusLift.from_strings(3, ["x"], {"y": "y^3"})
    lift = FrobeniusLift.from_strings(2, ["x"], {"x": "x^2 + 2*x"})
    assert not lift.is_standard
    assert render(delta_poly(lift, parse("x", ["x"]))) == "x"


LIFTS = {
    2: [{"x": "x^2", "y": "y^2", "z": "z^2"}, {"x": "x^2 + 2*x", "y": "y^2 + 2*x*z", "z": "z^2 - 2"}],
    3: [{"x": "x^3", "y": "y^3", "z": "z^3"}, {"x": "x^3 + 3*y^2", "y": "y^3 - 3*x*z + 3", "z": "z^3 + 6*z"}],
    5: [{"x": "x^5 + 5*x*y", "y": "y^5", "z": "z^5 + 10"}],
}


@pytest.mark.parametrize("p,images", [(p, im) for p, ims in LIFTS.items() for im in ims])
@pytest.mark.parametrize("k", [1, 2])
def test_delta_matches_exact_expansion(p, images, k):
    lift = FrobeniusLift.from_strings(p, XYZ, images, k)
    rng = random.Random(p * 10 + k)
    for _ in range(15):
        f = random_poly(rng, ZZ, XYZ, max_degree=2, max_terms=3)
        ours = {m: c for m, c in delta_poly(lift, f).terms.items()}
        assert ours == sympy_delta(render(f), p, images, k)


@pytest.mark.parametrize("p,images", [(p, im) for p, ims in LIFTS.items() for im in ims])
def test_axioms_hold(p, images):
    lift = FrobeniusLift.from_strings(p, XYZ, images, 2)
    report = check_p_derivation_axioms(lift, samples=40, seed=1)
    assert report.passed, report.failures[:3]


def test_single_variable_lift_passes_axioms():
    lift = FrobeniusLift.from_strings(2, ["x"], {"x": "x^2 + 2*x"}, 2)
    assert check_p_derivation_axioms(lift, samples=100).passed
    assert check_p_derivation_axioms(FrobeniusLift.standard(2, ["x"]), samples=100).passed


def test_membership_in_power_of_maximal_ideal():
    v = ("x",)
    R = Zmod(8)
    assert in_power_of_maximal_ideal(parse("4 + 2*x + x^2", v, R), 2, 2)
    assert not in_power_of_maximal_ideal(parse("2 + x^2", v, R), 2, 2)
    assert in_power_of_maximal_ideal(Poly.zero(R, v), 2, 3)


def test_broken_identity_is_detected():
    # dropping the p*delta(x)*delta(y) term is wrong at k = 2
    lift = FrobeniusLift.standard(2, ["x"], 2)
    x = parse("x + 1", ["x"])
    d = lambda f: delta_poly(lift, f)  # noqa: E731
    out = lift.out_ring
    good = x.change_ring(out) ** 2 * d(x) * 2 + (d(x) * d(x)).scale(2)
    bad = x.change_ring(out) ** 2 * d(x) * 2
    assert d(x * x) == good
    assert d(x * x) != bad


def test_kummer_examples():
    assert ((3 + 5) ** 4 + 2 * cp(2, [3, 5]) ** 2 - 3**4 - 5**4) % 4 == 0
    assert cp(2, [3, 5]) == -15
    assert ((1 + 0) ** 9 + 3 * cp(3, [1, 0]) ** 3 - 1) % 9 == 0
    for p in (2, 3, 5):
        assert check_kummer_lemma(p, samples=20, seed=p).passed


@settings(max_examples=25, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.sampled_from([2, 3, 5, 7]))
def test_kummer_integers(a, b, p):
    q = p * p
    assert ((a + b) ** q + p * cp(p, [a, b]) ** p - a**q - b**q) % q == 0


def test_universal_perivation():
    lift = FrobeniusLift.standard(2, ["x"])
    d = PerivationMap.universal(lift)
    assert check_perivation(d, samples=60).passed
    x = parse("x", ["x"])
    assert d(x) == (Poly.zero(GF(2), ["x"]), Poly.constant(1, GF(2), ["x"]))
    dp = d.distinguished_element()
    assert dp[0].constant_term() == 1 and dp[1].is_zero()
    nonstandard = PerivationMap.universal(FrobeniusLift.from_strings(3, XYZ, LIFTS[3][1]))
    assert check_perivation(nonstandard, samples=30).passed


def test_zero_perivation():
    lift = FrobeniusLift.standard(2, ["x"])
    assert check_perivation(PerivationMap.zero(lift, 2), samples=30).passed


def test_corrupted_distinguished_element_fails():
    lift = FrobeniusLift.standard(2, ["x"])
    u = PerivationMap.universal(lift)
    zero = tuple(Poly.zero(GF(2), ["x"]) for _ in range(2))
    broken = PerivationMap(lift, u.p_image, u.var_images, zero)
    report = check_perivation(broken, samples=5)
    assert not report.passed
    first = report.failures[0]
    assert first["check"] == "sum axiom"
    assert (str(first["x"]), str(first["y"])) == ("1", "-1")
    assert cp(2, [1, -1]) == 1
