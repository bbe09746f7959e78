"""Universal perivation modules as finitely presented modules over the fiber.

For R = Z[x]/I the module is the cokernel of the mixed Jacobian over
S = F_p[x]/(I mod p), on free generators dp, dx_1, ..., dx_n. Regularity at a
maximal ideal containing p is freeness of rank dim(R_m) = (n + 1) - h there.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .delta import CheckReport
from .errors import IdealMismatchError, InputError
from .groebner import GroebnerBasis, buchberger
from .mixedjac import (
    PointReport,
    Presentation,
    PolyMatrix,
    _check_point,
    fiber_gb,
    fiber_points,
    minors_ideal,
    mixed_jacobian,
    regular_at_point,
)
from .numeric import QQ, rank_mod_p, row_reduce_mod_p
from .polynomial import GREVLEX, Poly

__all__ = [
    "FPModule",
    "TruncatedModule",
    "perivation_module",
    "fitting_ideal",
    "fitting_ideals",
    "regularity_via_theorem_b",
    "check_theorem_ab_agreement",
    "truncate",
    "check_generator_invariance",
    "check_second_fundamental_sequence",
]


@dataclass(frozen=True)
class FPModule:
    """coker(relations) over F_p[x]/(fiber ideal); relation entries are normal forms."""

    fiber: GroebnerBasis
    relations: tuple
    gen_labels: tuple

    @property
    def ngens(self) -> int:
        return len(self.gen_labels)

    @property
    def p(self) -> int:
        return self.fiber.ring.modulus

    @property
    def variables(self) -> tuple:
        return self.fiber.variables

    def relation_matrix(self) -> PolyMatrix:
        labels = tuple(f"r{i + 1}" for i in range(len(self.relations)))
        return PolyMatrix(self.relations, labels, self.gen_labels, self.fiber.ring, self.variables)

    def to_dict(self) -> dict:
        return {
            "prime": self.p,
            "variables": list(self.variables),
            "ambient_ideal_gb": self.fiber.to_strings(),
            "generators": ["d" + g for g in self.gen_labels],
            "relations": [[str(e) for e in row] for row in self.relations],
        }


@lru_cache(maxsize=256)
def perivation_module(pres: Presentation) -> FPModule:
    fiber = fiber_gb(pres)
    rows = tuple(tuple(fiber.normal_form(e) for e in row) for row in mixed_jacobian(pres).entries)
    return FPModule(fiber, rows, ("p",) + pres.variables)


def fitting_ideal(M: FPModule, j: int) -> GroebnerBasis:
    """F_j: the fiber ideal plus all (g - j)-minors of the relation matrix."""
    if j < 0:
        raise InputError("Fitting index must be >= 0")
    fiber = M.fiber
    size = M.ngens - j
    if size <= 0:
        return buchberger([Poly.constant(1, fiber.ring, fiber.variables)], fiber.order)
    if size > len(M.relations):
        return fiber
    minors = [m for m in minors_ideal(M.relation_matrix(), size) if not m.is_zero()]
    return buchberger(list(fiber.polys) + minors, fiber.order, ring=fiber.ring, variables=fiber.variables)


def fitting_ideals(M: FPModule) -> list[GroebnerBasis]:
    return [fitting_ideal(M, j) for j in range(M.ngens + 1)]


def regularity_via_theorem_b(pres: Presentation, point: Sequence[int]) -> PointReport:
    """Is the perivation module free of rank (n + 1) - h at (p, x - v)?

    Two conditions: the Fitting ideal F_d (d the target rank) is not contained
    in the maximal ideal, and the minimal number of generators there, which is
    g minus the rank of the relation matrix mod the point, equals d.
    """
    point = _check_point(pres, point)
    M = perivation_module(pres)
    g = M.ngens
    target = g - pres.height
    fd = fitting_ideal(M, target)
    unit_locally = any(f.evaluate(point) != 0 for f in fd)
    values = [[e.evaluate(point) for e in row] for row in M.relations]
    rank = rank_mod_p(values, pres.p) if values else 0
    mu = g - rank
    regular = unit_locally and mu == target
    diagnostic = None
    if rank > pres.height:
        diagnostic = f"rank {rank} exceeds asserted height {pres.height}; the height assertion is wrong"
    return PointReport(regular, rank, pres.height, point, "thmB", mu if regular else None, diagnostic)


def check_theorem_ab_agreement(pres: Presentation, points: Iterable | None = None) -> CheckReport:
    report = CheckReport(f"rank test vs Fitting test (p={pres.p})")
    pts = fiber_points(pres) if points is None else points
    for v in pts:
        a = regular_at_point(pres, v)
        b = regularity_via_theorem_b(pres, v)
        report.record("same verdict", a.regular == b.regular, point=list(v), thmA=a.regular, thmB=b.regular)
    return report


# ---------------------------------------------------------------- truncation


def _monomials_below(n: int, k: int):
    """Exponent vectors of total degree < k, by degree then lexicographically."""
    out = []
    for d in range(k):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return sorted(set(out), key=lambda m: (sum(m), tuple(-x for x in m)))


def _divisible_by_any(m, lms) -> bool:
    return any(all(a <= b for a, b in zip(lm, m)) for lm in lms)


@dataclass(frozen=True)
class TruncatedModule:
    """The degree < k part of a finitely presented module, as an F_p vector space.

    ``basis`` lists (generator index, standard monomial) pairs spanning the
    degree < k part of the free module over the fiber ring; ``relations`` is an
    echelon basis of the relation submodule intersected with that part.
    """

    k: int
    p: int
    variables: tuple
    fiber: GroebnerBasis
    basis: tuple
    relations: tuple

    @property
    def free_dim(self) -> int:
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return self.free_dim - len(self.relations)

    def coordinates(self, vector: Sequence[Poly]) -> list[int] | None:
        """Coordinates of a free-module vector, or None if it has degree >= k."""
        index = {b: i for i, b in enumerate(self.basis)}
        coords = [0] * len(self.basis)
        for j, e in enumerate(vector):
            for m, c in self.fiber.normal_form(e).terms.items():
                if (j, m) not in index:
                    return None
                coords[index[(j, m)]] = c
        return coords

    def contains(self, vector: Sequence[Poly]) -> bool:
        coords = self.coordinates(vector)
        if coords is None:
            raise ValueError("vector does not lie in the truncated free module")
        if not self.relations:
            return not any(coords)
        return rank_mod_p(list(self.relations) + [coords], self.p) == len(self.relations)

    def quotient_rank(self) -> int:
        """Rank of the quotient map from the truncated free part onto this module."""
        if not self.basis:
            return 0
        identity = [[int(i == j) for j in range(self.free_dim)] for i in range(self.free_dim)]
        _, pivots = row_reduce_mod_p(list(self.relations) + identity, self.p)
        return len(pivots) - len(self.relations)

    def to_dict(self) -> dict:
        return {"truncation": self.k, "free_dimension": self.free_dim, "dimension": self.dimension}


def _module_gb(M: FPModule, fiber: GroebnerBasis):
    """GB of the relation module plus fiber-ideal multiples, encoded with marker variables.

    A vector (v_0..v_{g-1}) becomes sum v_j e_j in F_p[e, x]; adding all e_i e_j
    keeps the e-linear part equal to the submodule. grevlex on (e, x) is
    degree-compatible on e-linear terms.
    """
    g, n = M.ngens, len(M.variables)
    ring = fiber.ring
    evars = tuple(f"_e{j}" for j in range(g))
    allvars = evars + tuple(M.variables)

    def embed(poly: Poly, j: int | None) -> Poly:
        terms = {}
        for m, c in poly.terms.items():
            e = [0] * g
            if j is not None:
                e[j] = 1
            terms[tuple(e) + m] = c
        return Poly(ring, allvars, terms)

    gens = []
    for row in M.relations:
        v = Poly.zero(ring, allvars)
        for j, e in enumerate(row):
            v = v + embed(e, j)
        if not v.is_zero():
            gens.append(v)
    for f in fiber.polys:
        for j in range(g):
            gens.append(embed(f, j))
    for i in range(g):
        for j in range(i, g):
            e = [0] * (g + n)
            e[i] += 1
            e[j] += 1
            gens.append(Poly(ring, allvars, {tuple(e): 1}))
    gb = buchberger(gens, GREVLEX, ring=ring, variables=allvars)
    linear = []
    for poly in gb.polys:
        lm = poly.leading_monomial(GREVLEX)
        if sum(lm[:g]) != 1:
            continue
        comps = [dict() for _ in range(g)]
        for m, c in poly.terms.items():
            j = m[:g].index(1)
            comps[j][m[g:]] = c
        linear.append(tuple(Poly(ring, M.variables, t) for t in comps))
    return gb, linear


def truncate(M: FPModule, k: int | None = None) -> TruncatedModule:
    """Degree < k slice of M (affine Hilbert function); default k = 4."""
    k = 4 if k is None else k
    if k < 1:
        raise InputError("truncation degree must be >= 1")
    fiber = M.fiber if M.fiber.order == GREVLEX else buchberger(M.fiber.polys, GREVLEX)
    n, g = len(M.variables), M.ngens
    fiber_lms = fiber.leading_monomials
    standard = [m for m in _monomials_below(n, k) if not _divisible_by_any(m, fiber_lms)]
    basis = tuple((j, m) for j in range(g) for m in standard)
    if not basis:
        return TruncatedModule(k, M.p, M.variables, fiber, (), ())
    index = {b: i for i, b in enumerate(basis)}
    _, linear = _module_gb(M, fiber)
    rows = []
    for vec in linear:
        deg = max(e.degree() for e in vec)
        for mono in _monomials_below(n, k - deg):
            coords = [0] * len(basis)
            for j, e in enumerate(vec):
                for m, c in fiber.normal_form(e.mul_term(mono, 1)).terms.items():
                    coords[index[(j, m)]] = c
            rows.append(coords)
    echelon, _ = row_reduce_mod_p(rows, M.p) if rows else ([], [])
    return TruncatedModule(k, M.p, M.variables, fiber, basis, tuple(tuple(r) for r in echelon))


def _same_ideal(presA: Presentation, presB: Presentation):
    if presA.p != presB.p or presA.variables != presB.variables:
        raise IdealMismatchError("presentations differ in prime or variables")
    ga, gb_ = fiber_gb(presA), fiber_gb(presB)
    if not (ga.contains_ideal(presB.fiber_generators()) and gb_.contains_ideal(presA.fiber_generators())):
        raise IdealMismatchError("the mod-p fibers of the two ideals differ")
    qa = buchberger([g.change_ring(QQ) for g in presA.generators], ring=QQ, variables=presA.variables)
    qb = buchberger([g.change_ring(QQ) for g in presB.generators], ring=QQ, variables=presB.variables)
    if not (qa.contains_ideal(g.change_ring(QQ) for g in presB.generators)
            and qb.contains_ideal(g.change_ring(QQ) for g in presA.generators)):
        raise IdealMismatchError("the ideals differ over Q")


def check_generator_invariance(presA: Presentation, presB: Presentation, k: int | None = None) -> CheckReport:
    """Two generating sets of one ideal give the same truncations and Fitting ideals."""
    _same_ideal(presA, presB)
    k = presA.truncation if k is None else k
    report = CheckReport(f"generator invariance (p={presA.p}, k={k})")
    Ma, Mb = perivation_module(presA), perivation_module(presB)
    ta, tb = truncate(Ma, k), truncate(Mb, k)
    report.record("truncated dimension", ta.dimension == tb.dimension, a=ta.dimension, b=tb.dimension)
    for j, (fa, fb) in enumerate(zip(fitting_ideals(Ma), fitting_ideals(Mb))):
        report.record(f"F_{j}", fa.polys == fb.polys, a=fa.to_strings(), b=fb.to_strings())
    return report


def check_second_fundamental_sequence(pres: Presentation, k: int | None = None) -> CheckReport:
    """Truncated shadow of F(I/I^2) -> R/I (x) Omega_T -> Omega_R -> 0.

    Each generator's row (times monomials, while it stays in degree < k) dies in
    the truncated Omega_R, and the truncated free part surjects onto it.
    """
    k = pres.truncation if k is None else k
    M = perivation_module(pres)
    t = truncate(M, k)
    report = CheckReport(f"second fundamental sequence (p={pres.p}, k={k})")
    n = pres.n
    for name, row in zip(pres.names, M.relations):
        for mono in _monomials_below(n, k):
            vec = [e.mul_term(mono, 1) for e in row]
            if t.coordinates(vec) is None:
                continue
            report.record("composite is zero", t.contains(vec), generator=name, monomial=mono)
    report.record("surjective", t.quotient_rank() == t.dimension, rank=t.quotient_rank(), dim=t.dimension)
    return report
