"""Classical and mixed Jacobian matrices and the singular-locus decisions.

For R = Z[x_1..x_n]/(f_1..f_a) with I of pure height h, a prime containing p
is a regular point iff it does not contain the h x h minors of the mixed
Jacobian matrix, whose row for f_i is

    [delta(f_i), (df_i/dx_1)^p, ..., (df_i/dx_n)^p]    (entries mod p).

Primes not containing p are governed by the classical Jacobian over Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Mapping, Sequence

from .delta import FrobeniusLift, delta_poly
from .errors import HeightRangeError, InputError, NotOnVarietyError, PreconditionError
from .exprparser import parse
from .groebner import GroebnerBasis, buchberger
from .numeric import GF, QQ, ZZ, is_prime, rank_mod_p
from .polynomial import GREVLEX, MonomialOrder, Poly, get_order

__all__ = [
    "Presentation",
    "PolyMatrix",
    "Verdict",
    "PointReport",
    "classical_jacobian",
    "mixed_jacobian",
    "mixed_jacobian_row",
    "minors_ideal",
    "singular_locus_mod_p",
    "singular_locus_char_zero",
    "regular_at_point",
    "fiber_gb",
    "fiber_dimension",
    "height_warnings",
    "fiber_points",
    "on_fiber",
]

REGULAR = "regular"
SINGULAR = "singular"


class PresentationError(PreconditionError):
    code = "bad-presentation"


@dataclass(frozen=True)
class Presentation:
    """Z[variables]/(generators) at the prime p, with asserted pure height."""

    p: int
    variables: tuple
    generators: tuple
    height: int
    lift: FrobeniusLift | None = None
    order: MonomialOrder = GREVLEX
    truncation: int = 4
    names: tuple = field(default=())

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        if not is_prime(self.p):
            raise PresentationError(f"{self.p} is not prime")
        variables = tuple(self.variables)
        set_("variables", variables)
        gens = tuple(self.generators)
        for g in gens:
            if g.ring != ZZ or g.variables != variables:
                raise PresentationError(f"generator {g} is not in Z[{', '.join(variables)}]")
            if g.is_zero():
                raise PresentationError("generators must be nonzero (use an empty list for I = 0)")
        set_("generators", gens)
        bound = min(len(gens), len(variables) + 1)
        if not 0 <= self.height <= bound:
            raise HeightRangeError(f"height {self.height} outside [0, {bound}]")
        lift = self.lift or FrobeniusLift.standard(self.p, variables)
        if lift.p != self.p or lift.variables != variables:
            raise PresentationError("Frobenius lift does not match the prime or the variables")
        if lift.k != 1:
            lift = lift.with_precision(1)
        set_("lift", lift)
        set_("order", get_order(self.order))
        if self.truncation < 1:
            raise PresentationError("truncation degree must be >= 1")
        names = tuple(self.names) or tuple(f"f{i + 1}" for i in range(len(gens)))
        if len(names) != len(gens):
            raise PresentationError("one name per generator required")
        set_("names", names)

    @classmethod
    def from_strings(
        cls,
        p: int,
        variables: Sequence[str],
        generators: Sequence[str],
        height: int,
        lift: Mapping[str, str] | None = None,
        order: str = "grevlex",
        truncation: int = 4,
    ) -> "Presentation":
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise InputError(f"duplicate variables in {list(variables)}")
        gens = tuple(parse(s, variables, ZZ) for s in generators)
        flift = FrobeniusLift.from_strings(p, variables, lift) if is_prime(p) else None
        return cls(p, variables, gens, height, flift, get_order(order), truncation)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def field(self):
        return GF(self.p)

    def fiber_generators(self) -> list[Poly]:
        fp = self.field
        return [g.change_ring(fp) for g in self.generators]

    def with_lift(self, lift: FrobeniusLift) -> "Presentation":
        return Presentation(
            self.p, self.variables, self.generators, self.height, lift, self.order, self.truncation, self.names
        )

    def with_generators(self, generators: Sequence[Poly], height: int | None = None) -> "Presentation":
        return Presentation(
            self.p,
            self.variables,
            tuple(generators),
            self.height if height is None else height,
            self.lift,
            self.order,
            self.truncation,
        )

    def to_dict(self) -> dict:
        d = {
            "prime": self.p,
            "variables": list(self.variables),
            "generators": [str(g) for g in self.generators],
            "height": self.height,
        }
        if not self.lift.is_standard:
            d["frobenius_lift"] = self.lift.describe()
        d["order"] = self.order.name
        return d


@dataclass(frozen=True)
class PolyMatrix:
    entries: tuple
    row_labels: tuple
    col_labels: tuple
    ring: object
    variables: tuple

    @property
    def shape(self):
        return len(self.entries), len(self.col_labels)

    def row(self, i):
        return self.entries[i]

    def evaluate(self, point) -> list[list]:
        return [[e.evaluate(point) for e in row] for row in self.entries]

    def map(self, fn) -> "PolyMatrix":
        rows = tuple(tuple(fn(e) for e in row) for row in self.entries)
        ring = rows[0][0].ring if rows and rows[0] else self.ring
        return PolyMatrix(rows, self.row_labels, self.col_labels, ring, self.variables)

    def to_dict(self) -> dict:
        return {
            "rows": list(self.row_labels),
            "columns": list(self.col_labels),
            "matrix": [[str(e) for e in row] for row in self.entries],
        }


@dataclass(frozen=True)
class Verdict:
    kind: str
    gb: GroebnerBasis
    prime: int | None
    height: int
    lift: dict = field(default_factory=dict)

    @property
    def regular(self) -> bool:
        return self.kind == REGULAR

    def to_dict(self) -> dict:
        d = {
            "verdict": self.kind,
            "singular_ideal_gb": self.gb.to_strings(),
            "prime": self.prime,
            "height": self.height,
        }
        if self.lift:
            d["frobenius_lift"] = self.lift
        return d


@dataclass(frozen=True)
class PointReport:
    regular: bool
    rank: int
    height: int
    point: tuple
    method: str
    local_free_rank: int | None = None
    diagnostic: str | None = None

    def to_dict(self) -> dict:
        d = {
            "regular": self.regular,
            "rank": self.rank,
            "height": self.height,
            "point": list(self.point),
            "method": self.method,
        }
        if self.local_free_rank is not None:
            d["local_free_rank"] = self.local_free_rank
        if self.diagnostic:
            d["diagnostic"] = self.diagnostic
        return d


def classical_jacobian(pres: Presentation) -> PolyMatrix:
    rows = tuple(
        tuple(f.partial_derivative(j).change_ring(QQ) for j in range(pres.n)) for f in pres.generators
    )
    return PolyMatrix(rows, pres.names, pres.variables, QQ, pres.variables)


def mixed_jacobian_row(lift: FrobeniusLift, f: Poly) -> tuple:
    """[delta(f), (df/dx_1)^p, ..., (df/dx_n)^p] over F_p."""
    p = lift.p
    fp = GF(p)
    lift1 = lift if lift.k == 1 else lift.with_precision(1)
    row = [delta_poly(lift1, f).change_ring(fp)]
    fbar = f.change_ring(fp)
    for j in range(len(lift.variables)):
        # Frobenius is additive mod p, so reduce first, then raise to p
        row.append(fbar.partial_derivative(j) ** p)
    return tuple(row)


@lru_cache(maxsize=256)
def mixed_jacobian(pres: Presentation) -> PolyMatrix:
    rows = tuple(mixed_jacobian_row(pres.lift, f) for f in pres.generators)
    return PolyMatrix(rows, pres.names, ("p",) + pres.variables, pres.field, pres.variables)


def _determinant(entries, rows: tuple, cols: tuple, memo: dict):
    key = (rows, cols)
    if key in memo:
        return memo[key]
    if len(rows) == 1:
        det = entries[rows[0]][cols[0]]
    else:
        r0, rest = rows[0], rows[1:]
        det = None
        for idx, c in enumerate(cols):
            e = entries[r0][c]
            if e.is_zero():
                continue
            minor = _determinant(entries, rest, cols[:idx] + cols[idx + 1 :], memo)
            term = e * minor
            if idx % 2:
                term = -term
            det = term if det is None else det + term
        if det is None:
            det = entries[r0][cols[0]] * 0
    memo[key] = det
    return det


def minors_ideal(M: PolyMatrix, h: int) -> list[Poly]:
    """All h x h minors, by lexicographic (row subset, column subset); h = 0 gives [1]."""
    nrows, ncols = M.shape
    if not 0 <= h <= min(nrows, ncols):
        raise HeightRangeError(f"minor size {h} outside [0, {min(nrows, ncols)}]")
    if h == 0:
        return [Poly.constant(1, M.ring, M.variables)]
    memo: dict = {}
    return [
        _determinant(M.entries, rs, cs, memo)
        for rs in combinations(range(nrows), h)
        for cs in combinations(range(ncols), h)
    ]


@lru_cache(maxsize=256)
def fiber_gb(pres: Presentation) -> GroebnerBasis:
    return buchberger(pres.fiber_generators(), pres.order, ring=pres.field, variables=pres.variables)


def singular_locus_mod_p(pres: Presentation) -> Verdict:
    """GB over F_p of the fiber ideal plus the h x h minors of the mixed Jacobian."""
    gens = pres.fiber_generators() + [m for m in minors_ideal(mixed_jacobian(pres), pres.height) if not m.is_zero()]
    gb = buchberger(gens, pres.order, ring=pres.field, variables=pres.variables)
    lift = {} if pres.lift.is_standard else pres.lift.describe()
    return Verdict(REGULAR if gb.is_unit() else SINGULAR, gb, pres.p, pres.height, lift)


def singular_locus_char_zero(pres: Presentation) -> Verdict:
    """GB over Q of the generators plus the h x h minors of the classical Jacobian."""
    gens = [g.change_ring(QQ) for g in pres.generators]
    if pres.height <= pres.n:
        gens += [m for m in minors_ideal(classical_jacobian(pres), pres.height) if not m.is_zero()]
    # h = n + 1 has no h x h minors in an a x n matrix: the minors ideal is zero
    gb = buchberger(gens, pres.order, ring=QQ, variables=pres.variables)
    return Verdict(REGULAR if gb.is_unit() else SINGULAR, gb, None, pres.height)


def fiber_dimension(pres: Presentation) -> int:
    return fiber_gb(pres).dimension()


def height_warnings(pres: Presentation) -> list[str]:
    """Compare the asserted height with n - dim(F_p[x]/I mod p)."""
    gb = fiber_gb(pres)
    if gb.is_unit():
        return [f"fiber over p={pres.p} is empty; height cannot be checked there"]
    expected = pres.n - gb.dimension()
    if expected != pres.height:
        return [f"asserted height {pres.height} but the mod-{pres.p} fiber has codimension {expected}"]
    return []


def on_fiber(pres: Presentation, point: Sequence[int]) -> bool:
    return all(f.evaluate(point) == 0 for f in pres.fiber_generators())


def _check_point(pres: Presentation, point: Sequence[int]) -> tuple:
    if len(point) != pres.n:
        raise PreconditionError(f"point needs {pres.n} coordinates, got {len(point)}")
    point = tuple(int(v) % pres.p for v in point)
    for name, f in zip(pres.names, pres.fiber_generators()):
        if f.evaluate(point) != 0:
            raise NotOnVarietyError(f"{name} does not vanish mod {pres.p} at {list(point)}")
    return point


def fiber_points(pres: Presentation):
    """Every F_p-point of the fiber, in lexicographic order."""
    for v in product(range(pres.p), repeat=pres.n):
        if on_fiber(pres, v):
            yield v


def regular_at_point(pres: Presentation, point: Sequence[int]) -> PointReport:
    """Rank of the mixed Jacobian at the maximal ideal (p, x - v)."""
    point = _check_point(pres, point)
    values = mixed_jacobian(pres).evaluate(point)
    rank = rank_mod_p(values, pres.p) if values else 0
    diagnostic = None
    if rank > pres.height:
        diagnostic = f"rank {rank} exceeds asserted height {pres.height}; the height assertion is wrong"
    return PointReport(rank == pres.height, rank, pres.height, point, "thmA", diagnostic=diagnostic)
