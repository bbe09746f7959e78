"""Exact coefficient rings: the integers, residue rings Z/m, prime fields and Q.

Scalars are plain Python objects (``int`` for Z and Z/m, ``fractions.Fraction``
for Q). A ring object knows how to put a scalar into canonical form and how to
do the operations that are not plain Python arithmetic (inversion, equality
of moduli). Polynomials store raw scalars and defer to their ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import IncompatibleError, InvalidModulusError, NotDivisibleError

__all__ = [
    "Ring",
    "IntegerRing",
    "ModRing",
    "RationalField",
    "ZZ",
    "QQ",
    "GF",
    "Zmod",
    "ModInt",
    "mod_reduce",
    "divide_by_p",
    "binomial",
    "is_prime",
    "prime_power_exponent",
    "row_reduce_mod_p",
    "rank_mod_p",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_power_exponent(m: int, p: int) -> int | None:
    """Return k with m == p**k, or None."""
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return k if m == 1 else None


class Ring:
    """Common interface of the coefficient rings."""

    is_field = False
    characteristic = 0

    def convert(self, value):
        raise NotImplementedError

    def is_zero(self, value) -> bool:
        return value == 0

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def inverse(self, value):
        raise ZeroDivisionError(f"{value} is not invertible in {self}")

    def divide(self, a, b):
        return self.convert(a * self.inverse(b))

    def format(self, value) -> str:
        return str(value)


class IntegerRing(Ring):
    def convert(self, value):
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise IncompatibleError(f"{value} is not an integer")
            return value.numerator
        return int(value)

    def inverse(self, value):
        if value in (1, -1):
            return value
        return super().inverse(value)

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "ZZ"


class RationalField(Ring):
    is_field = True

    def convert(self, value):
        return Fraction(value)

    def inverse(self, value):
        if value == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return 1 / Fraction(value)

    def format(self, value) -> str:
        return str(value)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class ModRing(Ring):
    """Z/m with residues kept in [0, m). A field exactly when m is prime."""

    def __init__(self, modulus: int):
        modulus = int(modulus)
        if modulus < 2:
            raise InvalidModulusError(f"modulus must be >= 2, got {modulus}")
        self.modulus = modulus
        self.characteristic = modulus
        self.is_field = is_prime(modulus)

    def convert(self, value):
        if isinstance(value, Fraction):
            return value.numerator * pow(value.denominator, -1, self.modulus) % self.modulus
        return int(value) % self.modulus

    def inverse(self, value):
        try:
            return pow(int(value), -1, self.modulus)
        except ValueError:
            raise ZeroDivisionError(f"{value} is not invertible mod {self.modulus}") from None

    def __eq__(self, other):
        return isinstance(other, ModRing) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("Zmod", self.modulus))

    def __repr__(self):
        return f"GF({self.modulus})" if self.is_field else f"Zmod({self.modulus})"


ZZ = IntegerRing()
QQ = RationalField()


@lru_cache(maxsize=None)
def Zmod(m: int) -> ModRing:
    return ModRing(m)


def GF(p: int) -> ModRing:
    if not is_prime(p):
        raise InvalidModulusError(f"{p} is not prime")
    return Zmod(p)


@dataclass(frozen=True)
class ModInt:
    """A residue class r mod m with 0 <= r < m."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise InvalidModulusError(f"modulus must be >= 2, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            object.__setattr__(self, "residue", self.residue % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, ModInt):
            if other.modulus != self.modulus:
                raise IncompatibleError(
                    f"mixed moduli {self.modulus} and {other.modulus}"
                )
            return other.residue
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.residue + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.residue - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(o - self.residue, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.residue * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ModInt(-self.residue, self.modulus)

    def __pow__(self, e: int):
        return ModInt(pow(self.residue, e, self.modulus), self.modulus)

    def inverse(self) -> "ModInt":
        return ModInt(Zmod(self.modulus).inverse(self.residue), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * ModInt(o, self.modulus).inverse()

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} mod {self.modulus}"


def mod_reduce(x: int, m: int) -> ModInt:
    if m < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {m}")
    return ModInt(x % m, m)


def divide_by_p(x: ModInt, p: int) -> ModInt:
    """Realize p*(Z/p^(k+1)) ~= Z/p^k: return y mod p^k with p*y == x mod p^(k+1)."""
    k1 = prime_power_exponent(x.modulus, p)
    if k1 is None or k1 < 2:
        raise InvalidModulusError(
            f"modulus {x.modulus} is not p^(k+1) with k >= 1 for p={p}"
        )
    if x.residue % p:
        raise NotDivisibleError(f"{x.residue} mod {x.modulus} is not divisible by {p}")
    return ModInt(x.residue // p, x.modulus // p)


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be nonnegative")
    return math.comb(n, k)


def row_reduce_mod_p(rows, p: int):
    """Reduced row echelon form over F_p.

    Returns ``(echelon_rows, pivot_columns)``; the input is not modified.
    """
    m = [[v % p for v in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_mod_p(rows, p: int) -> int:
    return len(row_reduce_mod_p(rows, p)[1])
