"""Random instance generators and independent oracles used across the tests."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import sympy

from blweight.feasibility import IndexVector, check_sufficient
from blweight.structure import VectorSet, is_generic

TRIANGLE = VectorSet.from_rows([[1, 0], [0, 1], [1, 1]])
EXAMPLE3 = VectorSet.from_rows([[1, 0, 0], [1, 1, 0], [1, 0, 1], [1, -1, 0], [1, 0, -1]])
EXAMPLE3_IX = IndexVector([Fraction(11, 15), Fraction(6, 15), Fraction(2, 3), Fraction(6, 15), Fraction(2, 3)],
                          [Fraction(-2, 15), Fraction(2, 15), 0, Fraction(2, 15), 0])


def sympy_rank(rows) -> int:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows]).rank()


def random_rational(rng: random.Random, lo: int = -3, hi: int = 3, max_den: int = 30) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_generic(rng: random.Random, m: int, N: int, max_den: int = 30) -> VectorSet:
    while True:
        rows = [[random_rational(rng, max_den=max_den) for _ in range(m)] for _ in range(N)]
        if any(not any(r) for r in rows):
            continue
        E = VectorSet.from_rows(rows)
        if is_generic(E):
            return E


def random_scaling_index(rng: random.Random, m: int, N: int, max_den: int = 30) -> IndexVector:
    """Random p_inv, lambda with the scaling sum fixed at m (k = 1); other conditions unconstrained."""
    p_inv = [random_rational(rng, 0, 1, max_den) for _ in range(N)]
    lam = [random_rational(rng, -1, 1, max_den) for _ in range(N - 1)]
    lam.append(m - sum(p_inv) - sum(lam))
    return IndexVector(p_inv, lam)


def random_decomposable(rng: random.Random, m: int, N: int, tries: int = 2000):
    """A generic E and an index vector passing the sufficient index conditions with some lambda < 0."""
    E = random_generic(rng, m, N)
    for _ in range(tries):
        base = Fraction(m, N)
        s = [base + Fraction(rng.randint(-4, 4), 60) for _ in range(N - 1)]
        s.append(m - sum(s))
        n_neg = rng.randint(1, max(1, N - m - 1))
        lam = [Fraction(rng.randint(1, 12), 30) for _ in range(N)]
        for j in rng.sample(range(N), n_neg):
            lam[j] = -Fraction(rng.randint(1, 8), 30)
        p_inv = [a - b for a, b in zip(s, lam)]
        ix = IndexVector(p_inv, lam)
        if check_sufficient(E, ix).passed:
            return E, ix
    raise RuntimeError("no admissible index vector found")


def oracle_flats(E: VectorSet) -> list[tuple[int, tuple[int, ...]]]:
    """Subsets S that no outside vector can join without raising the rank (sympy ranks)."""
    out = []
    for mask in range(1 << E.N):
        S = [j for j in range(E.N) if mask >> j & 1]
        r = sympy_rank([E.vectors[j] for j in S]) if S else 0
        if all(sympy_rank([E.vectors[j] for j in S + [i]]) > r for i in range(E.N) if i not in S):
            out.append((r, tuple(S)))
    return sorted(out)


def _solve_unique(A, b, n):
    """Plain Gauss-Jordan; None unless the system has exactly one solution."""
    M = [row[:] + [bi] for row, bi in zip(A, b)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            return None
        M[r], M[piv] = M[piv], M[r]
        M[r] = [v / M[r][c] for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        r += 1
    if any(row[n] != 0 for row in M[r:]):
        return None
    return tuple(M[i][n] for i in range(n))


def active_set_vertices(system) -> set[tuple[Fraction, ...]]:
    """Exhaustive vertex oracle: solve every full-rank choice of tight rows, keep feasible points."""
    n = system.n_vars
    eqs = system.equalities()
    ineq = [r for r in system.inequalities() if any(r.coeffs)]
    verts = set()
    for extra in combinations(ineq, n - len(eqs) if len(eqs) < n else 0):
        rows = eqs + list(extra)
        z = _solve_unique([list(r.coeffs) for r in rows], [r.rhs for r in rows], n)
        if z is None:
            continue
        if all(r.value(z) >= r.rhs for r in system.rows) and all(r.value(z) == r.rhs for r in system.extra_equalities):
            verts.add(z)
    return verts


def subset_flats_generic(E: VectorSet):
    """Expected strict/lambda flat sets for generic E with N >= m."""
    return [K for size in range(E.m) for K in combinations(range(E.N), size)]

