"""Independent oracles: exact sympy expansion and brute-force linear algebra.

Nothing here calls into the Groebner engine or the delta code under test.
"""

import itertools
import random

import sympy

from perijac.numeric import GF
from perijac.polynomial import Poly

XY = ("x", "y")


def _pivot_columns(rows, p):
    """Pivot columns of the row echelon form over F_p (plain Gaussian elimination)."""
    rows = [[v % p for v in r] for r in rows]
    pivots = []
    for c in range(len(rows[0]) if rows else 0):
        r = next((r for r in rows if r[c]), None)
        if r is None:
            continue
        rows.remove(r)
        inv = pow(r[c], p - 2, p)
        rows = [[(a - row[c] * inv * b) % p for a, b in zip(row, r)] if row[c] else row for row in rows]
        pivots.append(c)
    return pivots


def rank_mod_p(rows, p):
    return len(_pivot_columns(rows, p))


def sympy_delta(f: str, p: int, images: dict, k: int, variables=("x", "y", "z")) -> dict:
    """Exact (Phi(f) - f^p)/p over Z by sympy expansion, coefficients reduced mod p^k."""
    syms = sympy.symbols(variables)
    local = dict(zip(variables, syms))
    expr = sympy.sympify(f.replace("^", "**"), locals=local)
    phi = expr.subs({local[v]: sympy.sympify(images[v].replace("^", "**"), locals=local) for v in variables},
                    simultaneous=True)
    numer = sympy.Poly(sympy.expand(phi - expr**p), *syms)
    out = {}
    for mono, c in numer.terms():
        c = int(c)
        assert c % p == 0
        r = (c // p) % p**k
        if r:
            out[tuple(mono)] = r
    return out


def monomials_up_to(n, d):
    return [m for m in itertools.product(range(d + 1), repeat=n) if sum(m) <= d]


def oracle_member(gens, f, p, bound=6):
    """Is f in span{m * g : deg(m * g) <= bound}? Decided by row reduction over F_p."""
    n = len(f.variables)
    cols = {m: i for i, m in enumerate(monomials_up_to(n, bound))}
    rows = []
    for g in gens:
        if g.is_zero():
            continue
        for m in monomials_up_to(n, bound - g.degree()):
            row = [0] * len(cols)
            for gm, c in g.terms.items():
                row[cols[tuple(a + b for a, b in zip(gm, m))]] = int(c)
            rows.append(row)
    target = [0] * len(cols)
    for m, c in f.terms.items():
        target[cols[m]] = int(c)
    base = rank_mod_p(rows, p) if rows else 0
    return rank_mod_p(rows + [target], p) == base


def random_ideal(rng, p):
    ring = GF(p)
    gens = []
    for _ in range(rng.randint(1, 3)):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            m = rng.choice(monomials_up_to(2, 2))
            terms[m] = rng.randrange(p)
        gens.append(Poly(ring, XY, terms))
    return gens


def oracle_cases(count, seed=0):
    """Yield (p, gens, candidates): random ideals with degree <= 3 candidates, some planted members."""
    rng = random.Random(seed)
    for i in range(count):
        p = (2, 3)[i % 2]
        ring = GF(p)
        gens = random_ideal(rng, p)
        candidates = [Poly(ring, XY, {m: rng.randrange(p) for m in rng.sample(monomials_up_to(2, 3), 3)})]
        mult = Poly(ring, XY, {m: rng.randrange(p) for m in rng.sample(monomials_up_to(2, 1), 2)})
        candidates.append(gens[0] * mult)
        candidates.append(Poly.constant(1, ring, XY))
        candidates.append(Poly.variable(rng.randrange(2), ring, XY) ** 3)
        yield p, gens, candidates


def truncated_dimension(relations, fiber_gens, ngens, variables, p, k, bound):
    """dim of the degree < k part of F_p[x]^g / (relations + fiber * F_p[x]^g), by brute force.

    The submodule is spanned (up to degree ``bound``) by monomial multiples of
    the relation rows and of f * e_j for each fiber generator f. Columns are
    ordered with high degrees first, so echelon rows whose pivot has degree < k
    span the intersection with the degree < k part.
    """
    n = len(variables)
    monos = sorted(monomials_up_to(n, bound), key=lambda m: (-sum(m), m))
    cols = {(j, m): i for i, (m, j) in enumerate((m, j) for m in monos for j in range(ngens))}
    vectors = [list(r) for r in relations]
    for f in fiber_gens:
        for j in range(ngens):
            vectors.append([f if i == j else Poly.zero(f.ring, f.variables) for i in range(ngens)])
    rows = []
    for vec in vectors:
        deg = max((e.degree() for e in vec if not e.is_zero()), default=-1)
        if deg < 0:
            continue
        for m in monomials_up_to(n, bound - deg):
            row = [0] * len(cols)
            for j, e in enumerate(vec):
                for em, c in e.terms.items():
                    row[cols[(j, tuple(a + b for a, b in zip(em, m)))]] = int(c) % p
            rows.append(row)
    low = sum(1 for m in monos if sum(m) < k) * ngens
    if not rows:
        return low
    pivots = _pivot_columns(rows, p)
    low_start = len(cols) - low
    return low - sum(1 for c in pivots if c >= low_start)
