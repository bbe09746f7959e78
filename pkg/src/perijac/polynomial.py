"""Sparse multivariate polynomials over the rings of :mod:`perijac.numeric`."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from operator import add
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ArityError, DegreeOverflowError, IncompatibleError, NotDivisibleError
from .numeric import ModRing, Ring

__all__ = [
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "GRLEX",
    "get_order",
    "Poly",
    "coefficient_map",
    "partial_derivative",
    "substitute",
    "evaluate",
    "render_poly",
]

MAX_DEGREE = 2**31

Monomial = tuple


def _grevlex_key(m):
    return (sum(m), tuple(-e for e in reversed(m)))


def _lex_key(m):
    return m


def _grlex_key(m):
    return (sum(m), m)


@dataclass(frozen=True)
class MonomialOrder:
    """A term order given by a sort key; larger key means larger monomial.

    Variable precedence is declaration order (x1 > x2 > ... > xn).
    """

    name: str
    key: Callable[[tuple], tuple]

    def __repr__(self):
        return self.name


GREVLEX = MonomialOrder("grevlex", _grevlex_key)
LEX = MonomialOrder("lex", _lex_key)
GRLEX = MonomialOrder("grlex", _grlex_key)

_ORDERS = {o.name: o for o in (GREVLEX, LEX, GRLEX)}


def get_order(name: str | MonomialOrder) -> MonomialOrder:
    if isinstance(name, MonomialOrder):
        return name
    try:
        return _ORDERS[name]
    except KeyError:
        raise ValueError(f"unknown monomial order {name!r}; expected one of {sorted(_ORDERS)}") from None


class Poly:
    """An immutable polynomial: a map from exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "variables", "_terms", "_hash")

    def __init__(self, ring: Ring, variables: Sequence[str], terms: Mapping | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        self.ring = ring
        self.variables = variables
        self._hash = None
        clean = {}
        if terms:
            n = len(variables)
            conv = ring.convert
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n or any(e < 0 for e in m):
                    raise ArityError(f"bad exponent vector {m} for {n} variables")
                c = conv(c)
                if c != 0:
                    clean[m] = c
        self._terms = clean

    @classmethod
    def _raw(cls, ring, variables, terms):
        # trusted constructor: terms already canonical and zero-free
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.variables = variables
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, ring: Ring, variables: Sequence[str]) -> "Poly":
        return cls(ring, variables)

    @classmethod
    def constant(cls, c, ring: Ring, variables: Sequence[str]) -> "Poly":
        variables = tuple(variables)
        return cls(ring, variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, name: str | int, ring: Ring, variables: Sequence[str]) -> "Poly":
        variables = tuple(variables)
        i = name if isinstance(name, int) else variables.index(name)
        m = [0] * len(variables)
        m[i] = 1
        return cls(ring, variables, {tuple(m): 1})

    @classmethod
    def monomial(cls, exponents: Sequence[int], c, ring: Ring, variables: Sequence[str]) -> "Poly":
        return cls(ring, variables, {tuple(exponents): c})

    # basic accessors

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_term(self):
        return self._terms.get((0,) * self.nvars, self.ring.zero)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def __len__(self):
        return len(self._terms)

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder = GREVLEX):
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX):
        return self._terms[self.leading_monomial(order)]

    # arithmetic

    def _check(self, other: "Poly"):
        if self.ring != other.ring or self.variables != other.variables:
            raise IncompatibleError(
                f"incompatible polynomials: {self.ring}{list(self.variables)} vs "
                f"{other.ring}{list(other.variables)}"
            )

    def _lift_scalar(self, c) -> "Poly":
        return Poly.constant(c, self.ring, self.variables)

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self._lift_scalar(other)
        return NotImplemented

    def _combine(self, other, sign):
        res = dict(self._terms)
        get = res.get
        for m, c in other._terms.items():
            res[m] = get(m, 0) + sign * c
        conv = self.ring.convert
        out = {}
        for m, c in res.items():
            c = conv(c)
            if c != 0:
                out[m] = c
        return Poly._raw(self.ring, self.variables, out)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._combine(self, -1)

    def __neg__(self):
        conv = self.ring.convert
        return Poly._raw(self.ring, self.variables, {m: conv(-c) for m, c in self._terms.items()})

    def scale(self, c) -> "Poly":
        conv = self.ring.convert
        c = conv(c)
        if c == 0:
            return Poly._raw(self.ring, self.variables, {})
        out = {}
        for m, a in self._terms.items():
            v = conv(a * c)
            if v != 0:
                out[m] = v
        return Poly._raw(self.ring, self.variables, out)

    def mul_term(self, mono, c) -> "Poly":
        """Multiply by the single term c*x^mono."""
        conv = self.ring.convert
        out = {}
        for m, a in self._terms.items():
            v = conv(a * c)
            if v != 0:
                out[tuple(map(add, m, mono))] = v
        return Poly._raw(self.ring, self.variables, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return Poly._raw(self.ring, self.variables, {})
        if self.degree() + other.degree() > MAX_DEGREE:
            raise DegreeOverflowError("product degree exceeds 2^31")
        if len(a) < len(b):
            a, b = b, a
        res = {}
        get = res.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(map(add, ma, mb))
                res[m] = get(m, 0) + ca * cb
        conv = self.ring.convert
        out = {}
        for m, c in res.items():
            c = conv(c)
            if c != 0:
                out[m] = c
        return Poly._raw(self.ring, self.variables, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {e!r}")
        if e == 0:
            return self._lift_scalar(1)
        if self.degree() * e > MAX_DEGREE:
            raise DegreeOverflowError("power degree exceeds 2^31")
        if len(self._terms) == 1:
            ((m, c),) = self._terms.items()
            ce = pow(c, e, self.ring.modulus) if isinstance(self.ring, ModRing) else c**e
            return Poly(self.ring, self.variables, {tuple(x * e for x in m): ce})
        ring = self.ring
        if isinstance(ring, ModRing) and ring.is_field and e % ring.modulus == 0:
            # Frobenius over F_p: (sum c m)^p = sum c m^p
            p = ring.modulus
            frob = Poly._raw(ring, self.variables, {tuple(x * p for x in m): c for m, c in self._terms.items()})
            return frob ** (e // p)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # comparison / hashing

    def __eq__(self, other):
        if isinstance(other, Poly):
            return (
                self.ring == other.ring
                and self.variables == other.variables
                and self._terms == other._terms
            )
        if isinstance(other, (int, Fraction)):
            return self == self._lift_scalar(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.variables, frozenset(self._terms.items())))
        return self._hash

    # calculus and maps

    def partial_derivative(self, i: int) -> "Poly":
        return partial_derivative(self, i)

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        return substitute(self, images)

    def evaluate(self, point: Sequence):
        return evaluate(self, point)

    def map_coefficients(self, fn: Callable, ring: Ring) -> "Poly":
        return coefficient_map(self, fn, ring)

    def change_ring(self, ring: Ring) -> "Poly":
        """Reinterpret coefficients in ``ring`` (e.g. reduce mod m or embed into Q)."""
        return coefficient_map(self, lambda c: c, ring)

    def divide_by_p(self, p: int, ring: Ring) -> "Poly":
        """Divide every coefficient exactly by p, landing in ``ring``.

        Coefficients are taken as their canonical integer representatives.
        """

        def div(c):
            if c % p:
                raise NotDivisibleError(f"coefficient {c} is not divisible by {p}")
            return c // p

        return coefficient_map(self, div, ring)

    def with_variables(self, variables: Sequence[str]) -> "Poly":
        """Re-embed into a polynomial ring whose variable list contains ours."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.variables]
        n = len(variables)
        out = {}
        for m, c in self._terms.items():
            e = [0] * n
            for i, x in zip(idx, m):
                e[i] = x
            out[tuple(e)] = c
        return Poly._raw(self.ring, variables, out)

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"Poly({render_poly(self)!r}, {self.ring!r}, {list(self.variables)})"


def partial_derivative(f: Poly, i: int) -> Poly:
    if not 0 <= i < f.nvars:
        raise IndexError(f"variable index {i} out of range for {f.nvars} variables")
    out = {}
    conv = f.ring.convert
    for m, c in f._terms.items():
        e = m[i]
        if e:
            v = conv(c * e)
            if v != 0:
                out[m[:i] + (e - 1,) + m[i + 1 :]] = v
    return Poly._raw(f.ring, f.variables, out)


def substitute(f: Poly, images: Sequence[Poly]) -> Poly:
    """Simultaneous substitution x_i -> images[i]; the result lives in the images' ring."""
    images = list(images)
    if len(images) != f.nvars:
        raise ArityError(f"expected {f.nvars} images, got {len(images)}")
    if not images:
        raise ArityError("substitution into a polynomial with no variables needs a target ring")
    ring, variables = images[0].ring, images[0].variables
    for g in images[1:]:
        images[0]._check(g)
    # fast path: every image is a monic monomial, so substitution is linear on exponents
    if all(len(g) == 1 and next(iter(g._terms.values())) == 1 for g in images):
        vecs = [next(iter(g._terms)) for g in images]
        n = len(variables)
        res = {}
        get = res.get
        for m, c in f._terms.items():
            e = [0] * n
            for k, vec in zip(m, vecs):
                if k:
                    for j in range(n):
                        e[j] += k * vec[j]
            t = tuple(e)
            res[t] = get(t, 0) + c
        return Poly(ring, variables, res)
    cache: list[dict[int, Poly]] = [{0: Poly.constant(1, ring, variables), 1: g} for g in images]

    def power(i, e):
        table = cache[i]
        if e not in table:
            lower = max(k for k in table if k <= e)
            acc = table[lower]
            for k in range(lower + 1, e + 1):
                acc = acc * images[i]
                table[k] = acc
        return table[e]

    total = Poly.zero(ring, variables)
    for m, c in sorted(f._terms.items()):
        term = Poly.constant(c, ring, variables)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


def coefficient_map(f: Poly, fn: Callable, ring: Ring) -> Poly:
    """Apply a coefficient homomorphism termwise and renormalize."""
    conv = ring.convert
    out = {}
    for m, c in f._terms.items():
        v = conv(fn(c))
        if v != 0:
            out[m] = v
    return Poly._raw(ring, f.variables, out)


def evaluate(f: Poly, point: Sequence):
    if len(point) != f.nvars:
        raise ArityError(f"point has {len(point)} coordinates, expected {f.nvars}")
    ring = f.ring
    point = [ring.convert(v) for v in point]
    total = 0
    if isinstance(ring, ModRing):
        mod = ring.modulus
        for m, c in f._terms.items():
            t = c
            for v, e in zip(point, m):
                if e:
                    t = t * pow(v, e, mod) % mod
            total += t
    else:
        for m, c in f._terms.items():
            t = c
            for v, e in zip(point, m):
                if e:
                    t *= v**e
            total += t
    return ring.convert(total)


def _format_monomial(m, variables) -> str:
    parts = []
    for name, e in zip(variables, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def render_poly(f: Poly, order: MonomialOrder = GREVLEX) -> str:
    """Canonical text: terms in decreasing order, explicit ``*`` and ``^``."""
    if f.is_zero():
        return "0"
    out = []
    for idx, (m, c) in enumerate(f.sorted_terms(order)):
        neg = c < 0
        a = -c if neg else c
        mono = _format_monomial(m, f.variables)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def polys_in(ring: Ring, variables: Iterable[str]):
    """Convenience: the generators of ring[variables] as a tuple of Poly."""
    variables = tuple(variables)
    return tuple(Poly.variable(i, ring, variables) for i in range(len(variables)))

