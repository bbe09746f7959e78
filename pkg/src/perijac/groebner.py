"""Buchberger's algorithm over F_p and Q, with normal forms and Krull dimension.

Pairs are processed by the normal strategy (smallest lcm first, ties broken
by the term order and then by pair index) and filtered with Buchberger's
coprime and chain criteria. Output bases are reduced and sorted by
decreasing leading monomial, so they are unique and print deterministically.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations
from operator import add, sub
from typing import Iterable, Sequence

from .errors import GroebnerCeilingError, IncompatibleError, UndefinedDimensionError
from .numeric import Ring
from .polynomial import GREVLEX, MonomialOrder, Poly, get_order, render_poly

__all__ = [
    "GroebnerBasis",
    "buchberger",
    "normal_form",
    "is_unit_ideal",
    "dimension",
    "DEFAULT_MAX_PAIRS",
]

DEFAULT_MAX_PAIRS = 200_000


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(map(max, a, b))


def _reduce(terms: dict, basis, key, conv) -> dict:
    """Fully reduce ``terms`` by monic ``basis`` entries ``(lm, terms)``."""
    f = dict(terms)
    rem = {}
    while f:
        lm = max(f, key=key)
        c = f[lm]
        for glm, gterms in basis:
            if _divides(glm, lm):
                q = tuple(map(sub, lm, glm))
                for gm, gc in gterms.items():
                    m = tuple(map(add, gm, q))
                    v = conv(f.get(m, 0) - c * gc)
                    if v:
                        f[m] = v
                    else:
                        f.pop(m, None)
                break
        else:
            rem[lm] = c
            del f[lm]
    return rem


def _monic(terms: dict, key, ring: Ring):
    lm = max(terms, key=key)
    inv = ring.inverse(terms[lm])
    conv = ring.convert
    return lm, {m: conv(c * inv) for m, c in terms.items()}


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis, sorted by decreasing leading monomial."""

    polys: tuple
    order: MonomialOrder
    ring: Ring
    variables: tuple

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    @property
    def leading_monomials(self):
        return [g.leading_monomial(self.order) for g in self.polys]

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant()

    def is_zero_ideal(self) -> bool:
        return not self.polys

    def normal_form(self, f: Poly) -> Poly:
        if f.ring != self.ring or f.variables != self.variables:
            raise IncompatibleError(
                f"polynomial over {f.ring}{list(f.variables)} vs basis over "
                f"{self.ring}{list(self.variables)}"
            )
        key = self.order.key
        basis = [(g.leading_monomial(self.order), dict(g.terms)) for g in self.polys]
        return Poly._raw(f.ring, f.variables, _reduce(dict(f.terms), basis, key, f.ring.convert))

    def contains(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero()

    def contains_ideal(self, other: "GroebnerBasis | Iterable[Poly]") -> bool:
        return all(self.contains(g) for g in other)

    def dimension(self) -> int:
        return dimension(self, len(self.variables))

    def to_strings(self) -> list[str]:
        return [render_poly(g, self.order) for g in self.polys]

    def __eq__(self, other):
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return (
            self.polys == other.polys
            and self.order == other.order
            and self.ring == other.ring
            and self.variables == other.variables
        )

    def __hash__(self):
        return hash((self.polys, self.order.name, self.ring, self.variables))


def buchberger(
    generators: Sequence[Poly],
    order: MonomialOrder | str = GREVLEX,
    *,
    ring: Ring | None = None,
    variables: Sequence[str] | None = None,
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``generators``.

    ``ring`` and ``variables`` are only needed when ``generators`` is empty.
    Raises :class:`GroebnerCeilingError` if the pending-pair queue ever holds
    more than ``max_pairs`` pairs.
    """
    order = get_order(order)
    generators = list(generators)
    if generators:
        ring, variables = generators[0].ring, generators[0].variables
        for g in generators[1:]:
            generators[0]._check(g)
    variables = tuple(variables or ())
    if ring is not None and not ring.is_field:
        raise IncompatibleError(f"Groebner bases need a field, got {ring}")
    key = order.key
    conv = ring.convert if ring is not None else None

    basis: list[tuple] = []  # (lm, monic terms)
    pending: set = set()
    heap: list = []

    def push_pairs(j):
        lmj = basis[j][0]
        for i in range(j):
            lcm = _lcm(basis[i][0], lmj)
            pending.add((i, j))
            heapq.heappush(heap, (sum(lcm), key(lcm), i, j))
        if len(pending) > max_pairs:
            raise GroebnerCeilingError(f"critical-pair queue exceeded {max_pairs} pairs")

    def insert(terms) -> bool:
        h = _reduce(terms, basis, key, conv)
        if not h:
            return False
        lm, h = _monic(h, key, ring)
        basis.append((lm, h))
        push_pairs(len(basis) - 1)
        return not any(lm)

    unit = False
    for g in generators:
        if not g.is_zero() and insert(dict(g.terms)):
            unit = True
            break

    while heap and not unit:
        _, _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        lmi, fi = basis[i]
        lmj, fj = basis[j]
        lcm = _lcm(lmi, lmj)
        if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
            continue
        chain = False
        for k, (lmk, _) in enumerate(basis):
            if k in (i, j) or not _divides(lmk, lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                chain = True
                break
        if chain:
            continue
        qi = tuple(map(sub, lcm, lmi))
        qj = tuple(map(sub, lcm, lmj))
        s = {}
        for m, c in fi.items():
            s[tuple(map(add, m, qi))] = c
        for m, c in fj.items():
            t = tuple(map(add, m, qj))
            v = conv(s.get(t, 0) - c)
            if v:
                s[t] = v
            else:
                s.pop(t, None)
        if s and insert(s):
            unit = True

    if unit:
        one = Poly.constant(1, ring, variables)
        return GroebnerBasis((one,), order, ring, variables)
    return GroebnerBasis(_interreduce(basis, order, ring, variables), order, ring, variables)


def _interreduce(basis, order, ring, variables) -> tuple:
    key = order.key
    items = sorted(basis, key=lambda b: key(b[0]))
    minimal = []
    for lm, terms in items:
        if not any(_divides(other, lm) for other, _ in minimal):
            minimal.append((lm, terms))
    reduced = []
    for idx, (lm, terms) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        tail = dict(terms)
        del tail[lm]
        tail = _reduce(tail, others, key, ring.convert)
        tail[lm] = ring.one
        reduced.append((lm, tail))
    reduced.sort(key=lambda b: key(b[0]), reverse=True)
    return tuple(Poly._raw(ring, variables, terms) for _, terms in reduced)


def normal_form(f: Poly, gb: GroebnerBasis) -> Poly:
    return gb.normal_form(f)


def is_unit_ideal(gb: GroebnerBasis) -> bool:
    return gb.is_unit()


def dimension(gb: GroebnerBasis, nvars: int | None = None) -> int:
    """Krull dimension of k[x]/I from the leading-term ideal.

    The largest set S of variables such that no leading monomial involves
    only variables from S (a maximal independent set).
    """
    if gb.is_unit():
        raise UndefinedDimensionError("the unit ideal has no dimension")
    n = len(gb.variables) if nvars is None else nvars
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in gb.leading_monomials]
    for size in range(n, -1, -1):
        for s in combinations(range(n), size):
            s = frozenset(s)
            if not any(sup <= s for sup in supports):
                return size
    return 0
