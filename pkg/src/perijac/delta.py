"""p-derivations on Z[x_1..x_n] built from lifts of Frobenius.

A lift is stored as the images Phi(x_i) over Z. The p-derivation it defines is
``delta(f) = (Phi(f) - f^p) / p``; we only ever need it modulo p^k, so all
arithmetic is done in Z/p^(k+1) and the final exact division by p lands in
Z/p^k. Integers are fixed by Phi (the identity is the only lift on Z).

The module also carries randomized checkers for the p-derivation axioms, the
sum rule with C_p correction, the congruences delta(p r) = r^p and
delta(r^p) = 0 mod p, the mod p^2 lemma
``(x+y)^(p^2) + p C_p(x,y)^p = x^(p^2) + y^(p^2)``, and the perivation axioms
for the universal perivation on a polynomial ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InvalidLiftError, InvalidModulusError
from .exprparser import parse
from .numeric import GF, ZZ, ModRing, Zmod, is_prime
from .polynomial import Poly

__all__ = [
    "FrobeniusLift",
    "cp",
    "delta_int",
    "delta_poly",
    "CheckReport",
    "PerivationMap",
    "random_poly",
    "check_p_derivation_axioms",
    "check_kummer_lemma",
    "check_perivation",
    "in_power_of_maximal_ideal",
]


def _require_prime(p: int):
    if not is_prime(p):
        raise InvalidModulusError(f"{p} is not prime")


def cp(p: int, args: Sequence):
    """C_p(a_1..a_t) = (a_1^p + ... + a_t^p - (a_1 + ... + a_t)^p) / p.

    Integer arguments give an exact integer. Polynomial arguments over Z give
    an exact polynomial over Z; over Z/p^(k+1) the result lands in Z/p^k.
    """
    _require_prime(p)
    args = list(args)
    if len(args) < 2:
        raise ValueError("C_p needs at least two arguments")
    if all(isinstance(a, int) for a in args):
        return (sum(a**p for a in args) - sum(args) ** p) // p
    polys = [a for a in args if isinstance(a, Poly)]
    ring, variables = polys[0].ring, polys[0].variables
    args = [a if isinstance(a, Poly) else Poly.constant(a, ring, variables) for a in args]
    total = args[0]
    powers = args[0] ** p
    for a in args[1:]:
        total = total + a
        powers = powers + a**p
    numer = powers - total**p
    if ring == ZZ:
        return numer.divide_by_p(p, ZZ)
    if isinstance(ring, ModRing) and ring.modulus % (p * p) == 0:
        return numer.divide_by_p(p, Zmod(ring.modulus // p))
    raise InvalidModulusError(f"C_p over {ring} needs coefficients in Z or Z/p^(k+1), k >= 1")


def delta_int(p: int, n: int) -> int:
    """The unique p-derivation on Z: (n - n^p) / p."""
    _require_prime(p)
    return (n - n**p) // p


@dataclass(frozen=True)
class FrobeniusLift:
    """A lift of Frobenius on Z[variables] given by the images Phi(x_i).

    ``k`` is the output precision: delta values are computed modulo p^k.
    """

    p: int
    variables: tuple
    images: tuple
    k: int = 1
    _work_images: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidLiftError(f"{self.p} is not prime")
        if self.k < 1:
            raise InvalidLiftError(f"precision exponent must be >= 1, got {self.k}")
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        images = tuple(self.images)
        if len(images) != len(variables):
            raise InvalidLiftError(f"need {len(variables)} images, got {len(images)}")
        fp = GF(self.p)
        work = []
        for i, g in enumerate(images):
            if g.variables != variables:
                raise InvalidLiftError(f"image of {variables[i]} is over {g.variables}, expected {variables}")
            gap = (g - Poly.variable(i, g.ring, variables) ** self.p).change_ring(fp)
            if not gap.is_zero():
                raise InvalidLiftError(
                    f"Phi({variables[i]}) = {g} is not congruent to {variables[i]}^{self.p} mod {self.p}"
                )
            work.append(g.change_ring(self.work_ring))
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_work_images", tuple(work))

    @classmethod
    def standard(cls, p: int, variables: Sequence[str], k: int = 1) -> "FrobeniusLift":
        variables = tuple(variables)
        imgs = tuple(Poly.variable(i, ZZ, variables) ** p for i in range(len(variables)))
        return cls(p, variables, imgs, k)

    @classmethod
    def from_strings(
        cls, p: int, variables: Sequence[str], images: Mapping[str, str] | None = None, k: int = 1
    ) -> "FrobeniusLift":
        """Build from text images; variables missing from ``images`` get x^p."""
        variables = tuple(variables)
        images = dict(images or {})
        unknown = set(images) - set(variables)
        if unknown:
            raise InvalidLiftError(f"lift given for undeclared variables {sorted(unknown)}")
        imgs = []
        for i, v in enumerate(variables):
            if v in images:
                imgs.append(parse(images[v], variables, ZZ))
            else:
                imgs.append(Poly.variable(i, ZZ, variables) ** p)
        return cls(p, variables, tuple(imgs), k)

    @property
    def work_ring(self) -> ModRing:
        return Zmod(self.p ** (self.k + 1))

    @property
    def out_ring(self) -> ModRing:
        return Zmod(self.p**self.k)

    @property
    def is_standard(self) -> bool:
        return all(
            g == Poly.variable(i, ZZ, self.variables) ** self.p for i, g in enumerate(self.images)
        )

    def with_precision(self, k: int) -> "FrobeniusLift":
        return FrobeniusLift(self.p, self.variables, self.images, k)

    def phi(self, f: Poly) -> Poly:
        """Phi(f) in Z/p^(k+1)[x]."""
        return f.change_ring(self.work_ring).substitute(self._work_images)

    def delta(self, f: Poly) -> Poly:
        return delta_poly(self, f)

    def describe(self) -> dict:
        return {v: str(g) for v, g in zip(self.variables, self.images)}


def _to_work(lift: FrobeniusLift, f: Poly) -> Poly:
    if f.variables != lift.variables:
        f = f.with_variables(lift.variables)
    ring = f.ring
    if ring == ZZ:
        return f.change_ring(lift.work_ring)
    if isinstance(ring, ModRing) and ring.modulus % lift.work_ring.modulus == 0:
        return f.change_ring(lift.work_ring)
    raise InvalidModulusError(f"delta needs input over Z or Z/p^j with j >= {lift.k + 1}, got {ring}")


def delta_poly(lift: FrobeniusLift, f: Poly) -> Poly:
    """delta(f) = (Phi(f) - f^p) / p, as a polynomial over Z/p^k."""
    fw = _to_work(lift, f)
    numer = fw.substitute(lift._work_images) - fw**lift.p
    return numer.divide_by_p(lift.p, lift.out_ring)


# ---------------------------------------------------------------- checkers


@dataclass
class CheckReport:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, label: str, ok: bool, **details):
        self.checks += 1
        self.counts[label] = self.counts.get(label, 0) + 1
        if not ok:
            self.failures.append({"check": label, **{k: str(v) for k, v in details.items()}})

    def merge(self, other: "CheckReport") -> "CheckReport":
        self.checks += other.checks
        self.failures.extend(other.failures)
        for label, c in other.counts.items():
            self.counts[label] = self.counts.get(label, 0) + c
        return self

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "counts": dict(sorted(self.counts.items())),
            "failures": self.failures,
        }


def random_poly(rng: random.Random, ring, variables, max_degree=3, max_terms=3, coeff_bound=5) -> Poly:
    n = len(variables)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0, max_degree)
        e = [0] * n
        for _ in range(deg):
            e[rng.randrange(n)] += 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + rng.randint(-coeff_bound, coeff_bound)
    return Poly(ring, variables, terms)


def in_power_of_maximal_ideal(f: Poly, p: int, j: int) -> bool:
    """Is f (over Z/p^k, j <= k) in (p, x_1..x_n)^j?

    That ideal is generated by the products p^a x^alpha with a + |alpha| = j,
    so membership is termwise: v_p(c) + |alpha| >= j for every term.
    """
    for m, c in f.terms.items():
        v = 0
        while c % p == 0:
            c //= p
            v += 1
        if v + sum(m) < j:
            return False
    return True


def _ideal_power_element(rng, lift: FrobeniusLift, power: int) -> Poly:
    variables = lift.variables
    gens = [Poly.constant(lift.p, ZZ, variables)] + [
        Poly.variable(i, ZZ, variables) for i in range(len(variables))
    ]
    total = Poly.zero(ZZ, variables)
    for _ in range(rng.randint(1, 2)):
        term = random_poly(rng, ZZ, variables, max_degree=1, max_terms=2)
        for _ in range(power):
            term = term * rng.choice(gens)
        total = total + term
    return total


def check_p_derivation_axioms(
    lift: FrobeniusLift, samples: int = 100, degree: int = 3, seed: int = 0, max_terms: int = 3
) -> CheckReport:
    """Randomized check of the p-derivation identities at modulus p^k."""
    rng = random.Random(seed)
    p, variables = lift.p, lift.variables
    out = lift.out_ring
    fp = GF(p)
    report = CheckReport(f"p-derivation axioms (p={p}, k={lift.k})")

    def d(f):
        return delta_poly(lift, f)

    zero = Poly.zero(ZZ, variables)
    one = Poly.constant(1, ZZ, variables)
    report.record("delta(0) = 0", d(zero).is_zero())
    report.record("delta(1) = 0", d(one).is_zero())

    for s in range(samples):
        x, y, z = (random_poly(rng, ZZ, variables, degree, max_terms) for _ in range(3))
        dx, dy, dz = d(x), d(y), d(z)
        xo, yo = x.change_ring(out), y.change_ring(out)

        lhs = d(x + y)
        rhs = dx + dy + cp(p, [x, y]).change_ring(out)
        report.record("sum rule", lhs == rhs, sample=s, x=x, y=y)

        lhs = d(x * y)
        rhs = xo**p * dy + yo**p * dx + (dx * dy).scale(p)
        report.record("product rule", lhs == rhs, sample=s, x=x, y=y)

        lhs = d(x + y + z)
        rhs = dx + dy + dz + cp(p, [x, y, z]).change_ring(out)
        report.record("multi-sum rule", lhs == rhs, sample=s, x=x, y=y, z=z)

        lhs = d(x.scale(p)).change_ring(fp)
        report.record("delta(p r) = r^p mod p", lhs == x.change_ring(fp) ** p, sample=s, r=x)

        report.record("delta(r^p) = 0 mod p", d(x**p).change_ring(fp).is_zero(), sample=s, r=x)

        for j in range(1, lift.k + 1):
            a = _ideal_power_element(rng, lift, j + 1)
            ok = in_power_of_maximal_ideal(d(a), p, j)
            report.record(f"delta(m^{j + 1}) in m^{j}", ok, sample=s, a=a)
    return report


def check_kummer_lemma(
    p: int, samples: int = 50, seed: int = 0, variables: Sequence[str] = ("x", "y"), degree: int = 2
) -> CheckReport:
    """(x+y)^(p^2) + p C_p(x,y)^p = x^(p^2) + y^(p^2) mod p^2, on integers and polynomials."""
    _require_prime(p)
    rng = random.Random(seed)
    q = p * p
    report = CheckReport(f"mod p^2 lemma (p={p})")
    for s in range(samples):
        a, b = rng.randint(-1000, 1000), rng.randint(-1000, 1000)
        lhs = (a + b) ** q + p * cp(p, [a, b]) ** p
        report.record("integers", (lhs - a**q - b**q) % q == 0, sample=s, x=a, y=b)

    ring = Zmod(q)
    variables = tuple(variables)
    for s in range(samples):
        a = random_poly(rng, ZZ, variables, degree, 3)
        b = random_poly(rng, ZZ, variables, degree, 3)
        ar, br = a.change_ring(ring), b.change_ring(ring)
        c = cp(p, [a, b]).change_ring(ring)
        lhs = (ar + br) ** q + (c**p).scale(p)
        rhs = ar**q + br**q
        report.record("polynomials", lhs == rhs, sample=s, x=a, y=b)
    return report


# ---------------------------------------------------------------- perivations


def _vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vec_scale(c: Poly, v):
    return tuple(c * a for a in v)


@dataclass(frozen=True)
class PerivationMap:
    """alpha(t) = eps(t) * m_p + sum_i (d t / d x_i)^p * m_i into a free F_p[x]-module.

    ``eps`` is the mod-p reduction of the lift's p-derivation. ``distinguished``
    is the value used for alpha(p) in the sum axiom; when omitted it is alpha(p)
    computed by the formula.
    """

    lift: FrobeniusLift
    p_image: tuple
    var_images: tuple
    distinguished: tuple | None = None

    @property
    def rank(self) -> int:
        return len(self.p_image)

    @classmethod
    def universal(cls, lift: FrobeniusLift) -> "PerivationMap":
        fp = GF(lift.p)
        g = len(lift.variables) + 1
        basis = [
            tuple(Poly.constant(int(i == j), fp, lift.variables) for j in range(g)) for i in range(g)
        ]
        return cls(lift, basis[0], tuple(basis[1:]))

    @classmethod
    def zero(cls, lift: FrobeniusLift, rank: int) -> "PerivationMap":
        z = tuple(Poly.zero(GF(lift.p), lift.variables) for _ in range(rank))
        return cls(lift, z, tuple(z for _ in lift.variables), z)

    def __call__(self, t: Poly):
        p = self.lift.p
        fp = GF(p)
        eps = delta_poly(self.lift, t).change_ring(fp)
        vec = _vec_scale(eps, self.p_image)
        tp = t.change_ring(fp)
        for i, m_i in enumerate(self.var_images):
            vec = _vec_add(vec, _vec_scale(tp.partial_derivative(i) ** p, m_i))
        return vec

    def distinguished_element(self):
        if self.distinguished is not None:
            return self.distinguished
        return self(Poly.constant(self.lift.p, ZZ, self.lift.variables))


def check_perivation(alpha: PerivationMap, samples: int = 50, seed: int = 0, degree: int = 2) -> CheckReport:
    """Randomized check of the perivation axioms for ``alpha``."""
    lift = alpha.lift
    p, variables = lift.p, lift.variables
    fp = GF(p)
    rng = random.Random(seed)
    report = CheckReport(f"perivation axioms (p={p})")
    zero_vec = tuple(Poly.zero(fp, variables) for _ in range(alpha.rank))
    dist = alpha.distinguished_element()

    def const(c):
        return Poly.constant(c, ZZ, variables)

    report.record("alpha(0) = 0", alpha(const(0)) == zero_vec)
    report.record("alpha(1) = 0", alpha(const(1)) == zero_vec)

    pairs = [(const(1), const(-1)), (const(-1), const(-1)), (const(p), const(-p)), (const(1), const(1))]
    for _ in range(samples):
        pairs.append(tuple(random_poly(rng, ZZ, variables, degree, 3) for _ in range(2)))

    for s, (x, y) in enumerate(pairs):
        ax, ay = alpha(x), alpha(y)
        c = cp(p, [x, y]).change_ring(fp)
        rhs = _vec_add(_vec_add(ax, ay), _vec_scale(c, dist))
        report.record("sum axiom", alpha(x + y) == rhs, sample=s, x=x, y=y)
        xp, yp = x.change_ring(fp) ** p, y.change_ring(fp) ** p
        rhs = _vec_add(_vec_scale(xp, ay), _vec_scale(yp, ax))
        report.record("product axiom", alpha(x * y) == rhs, sample=s, x=x, y=y)
    return report
