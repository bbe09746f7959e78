from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from perijac.errors import IncompatibleError, InvalidModulusError, NotDivisibleError
from perijac.numeric import (
    GF,
    QQ,
    ZZ,
    ModInt,
    Zmod,
    binomial,
    divide_by_p,
    is_prime,
    mod_reduce,
    rank_mod_p,
)

ints = st.integers(min_value=-10**30, max_value=10**30)


def test_mod_reduce_examples():
    assert mod_reduce(-6, 4) == ModInt(2, 4)
    assert mod_reduce(0, 7).residue == 0
    # digit-sum oracle: 10^40 + 3 has digit sum 4
    assert mod_reduce(10**40 + 3, 9).residue == 4
    with pytest.raises(InvalidModulusError):
        mod_reduce(3, 1)


def test_divide_by_p_examples():
    assert divide_by_p(ModInt(6, 8), 2) == ModInt(3, 4)
    assert divide_by_p(ModInt(0, 27), 3) == ModInt(0, 9)
    with pytest.raises(NotDivisibleError):
        divide_by_p(ModInt(5, 8), 2)


@given(ints, st.sampled_from([2, 3, 5, 7]), st.integers(1, 4))
def test_divide_by_p_inverts_multiplication(x, p, k):
    assert divide_by_p(mod_reduce(p * x, p ** (k + 1)), p) == mod_reduce(x, p**k)


def test_binomial():
    assert binomial(5, 2) == 10
    assert binomial(4, 7) == 0


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_binomial_of_multiples_mod_p_squared(p):
    for n in range(31):
        for m in range(n + 1):
            assert (binomial(p * n, p * m) - binomial(n, m)) % (p * p) == 0


@pytest.mark.parametrize("p", [2, 3, 5, 7, 101])
def test_field_inverses(p):
    F = GF(p)
    for a in range(1, p):
        assert F.convert(a * F.inverse(a)) == 1
        assert ModInt(a, p) * ModInt(a, p).inverse() == ModInt(1, p)


@given(ints, ints, ints, st.integers(2, 10**6))
def test_modint_ring_axioms(a, b, c, m):
    x, y, z = ModInt(a, m), ModInt(b, m), ModInt(c, m)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == ModInt(0, m)
    assert 0 <= (x * y - z).residue < m


@given(st.fractions(), st.fractions(), st.fractions())
def test_rational_ring_axioms(a, b, c):
    a, b, c = QQ.convert(a), QQ.convert(b), QQ.convert(c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == 0
    if a:
        assert a * QQ.inverse(a) == 1
    assert Fraction(a).denominator > 0


def test_mixed_moduli_rejected():
    with pytest.raises(IncompatibleError):
        ModInt(1, 4) + ModInt(1, 8)


def test_rings():
    assert ZZ.convert(7) == 7
    assert Zmod(8).convert(-1) == 7
    assert GF(5).is_field and not Zmod(4).is_field
    with pytest.raises(InvalidModulusError):
        GF(9)
    with pytest.raises(ZeroDivisionError):
        GF(7).inverse(0)


def test_primality_matches_trial_division():
    def slow(n):
        return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))

    assert [n for n in range(2000) if is_prime(n)] == [n for n in range(2000) if slow(n)]
    assert is_prime(2**31 - 1) and not is_prime(2**31 + 1)


def test_rank_mod_p():
    assert rank_mod_p([[1, 1], [1, 1]], 2) == 1
    assert rank_mod_p([[1, 0], [0, 1]], 3) == 2
    assert rank_mod_p([[2, 4], [1, 2]], 3) == 1
    assert rank_mod_p([[0, 0]], 5) == 0
