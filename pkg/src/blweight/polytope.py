"""The necessary-condition polytope in (x, mu) = (1/p, lambda/k) coordinates.

Every row reads ``coeffs . z >= rhs`` with ``z = (x_1..x_N, mu_1..mu_N)``.
The scaling equality appears as the pair of rows ``scaling_ge`` and
``scaling_le`` so that row ids map one-to-one onto conditions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .errors import CapExceededError, InputError, InvariantError
from .exact_linalg import (SpanTester, dot, nullspace, particular_solution,
                           primitive_integer, rank)
from .feasibility import IndexVector
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp
from .structure import Flat, VectorSet, enumerate_flats

DEFAULT_VERTEX_CAP = int(os.environ.get("BLWEIGHT_VERTEX_CAP", 12))

SATISFIES_ALL = "satisfies_all"
VIOLATES = "violates"


@dataclass(frozen=True)
class Row:
    id: str
    source: str
    coeffs: tuple[Fraction, ...]
    rhs: Fraction
    flat: tuple[int, ...] | None = None

    @property
    def trivial(self) -> bool:
        return not any(self.coeffs) and self.rhs <= 0

    def value(self, z: Sequence[Fraction]) -> Fraction:
        return dot(self.coeffs, z)


@dataclass(frozen=True)
class ConstraintSystem:
    m: int
    N: int
    rows: tuple[Row, ...]
    extra_equalities: tuple[Row, ...] = ()
    flats: tuple[Flat, ...] = field(default=(), compare=False)

    @property
    def n_vars(self) -> int:
        return 2 * self.N

    def row(self, row_id: str) -> Row:
        for r in self.rows + self.extra_equalities:
            if r.id == row_id:
                return r
        raise KeyError(row_id)

    def equalities(self) -> list[Row]:
        """Rows holding with equality: the scaling row plus any slice equations."""
        return [self.row("scaling_ge")] + list(self.extra_equalities)

    def inequalities(self) -> list[Row]:
        return [r for r in self.rows if r.id not in ("scaling_ge", "scaling_le")]


@dataclass(frozen=True)
class Vertex:
    coordinates: tuple[Fraction, ...]
    tight: tuple[str, ...]

    def x(self) -> tuple[Fraction, ...]:
        return self.coordinates[: len(self.coordinates) // 2]

    def mu(self) -> tuple[Fraction, ...]:
        return self.coordinates[len(self.coordinates) // 2:]


@dataclass(frozen=True)
class InteriorPoint:
    point: tuple[Fraction, ...]
    min_slack: Fraction


def _label(members: Sequence[int]) -> str:
    return "{" + ",".join(str(j + 1) for j in members) + "}"


def build_system(E: VectorSet, k: int | None = None, flats: Sequence[Flat] | None = None) -> ConstraintSystem:
    """Rows: per flat a subspace row and a lambda row, then box, scaling, integrability.

    The system is independent of k in these coordinates; ``k`` is accepted
    for interface symmetry only.
    """
    E.require_noncollinear()
    flats = tuple(enumerate_flats(E) if flats is None else flats)
    N, m = E.N, E.m
    zero = Fraction(0)
    one = Fraction(1)
    rows = []
    for F in flats:
        out = [j not in F.members for j in range(N)]
        coeffs = tuple(one if o else zero for o in out)
        rows.append(Row(f"subspace{_label(F.members)}", "subspace", coeffs + coeffs, Fraction(m - F.rank), F.members))
        rows.append(Row(f"lambda{_label(F.members)}", "lambda", (zero,) * N + coeffs, zero, F.members))
    for j in range(N):
        e = tuple(one if i == j else zero for i in range(2 * N))
        rows.append(Row(f"box_lo[{j + 1}]", "box", e, zero))
        rows.append(Row(f"box_hi[{j + 1}]", "box", tuple(-v for v in e), -one))
    ones = (one,) * (2 * N)
    rows.append(Row("scaling_ge", "scaling", ones, Fraction(m)))
    rows.append(Row("scaling_le", "scaling", tuple(-v for v in ones), Fraction(-m)))
    rows.append(Row("integrability", "integrability", (one,) * N + (zero,) * N, one))
    return ConstraintSystem(m, N, tuple(rows), (), flats)


def with_lambda_zero(system: ConstraintSystem) -> ConstraintSystem:
    """Restrict to the unweighted slice mu = 0."""
    N = system.N
    eqs = []
    for j in range(N):
        e = tuple(Fraction(int(i == N + j)) for i in range(2 * N))
        eqs.append(Row(f"mu_zero[{j + 1}]", "slice", e, Fraction(0)))
    return replace(system, extra_equalities=system.extra_equalities + tuple(eqs))


def point_from_index(ix: IndexVector) -> tuple[Fraction, ...]:
    return tuple(ix.p_inv) + tuple(l / ix.k for l in ix.lam)


def feasible(system: ConstraintSystem, point: Sequence) -> tuple[str, list[str]]:
    z = tuple(Fraction(v) for v in point)
    if len(z) != system.n_vars:
        raise InputError(f"point has dimension {len(z)}, expected {system.n_vars}")
    bad = [r.id for r in system.rows if r.value(z) < r.rhs]
    bad += [r.id for r in system.extra_equalities if r.value(z) != r.rhs]
    return (VIOLATES if bad else SATISFIES_ALL), bad


def _lp_arrays(system: ConstraintSystem):
    ineq = system.inequalities()
    eqs = system.equalities()
    return ([r.coeffs for r in ineq], [r.rhs for r in ineq],
            [r.coeffs for r in eqs], [r.rhs for r in eqs])


def is_nonempty(system: ConstraintSystem) -> bool:
    A, b, C, d = _lp_arrays(system)
    return solve_lp([0] * system.n_vars, A, b, C, d).status != INFEASIBLE


def double_description(M: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {y : M y >= 0} (M of full column rank).

    Incremental double description with the combinatorial adjacency test.
    Rays are kept as primitive integer vectors.
    """
    M = [tuple(int(v) for v in row) for row in M]
    d = len(M[0])
    chosen = []
    for i, row in enumerate(M):
        if rank([M[j] for j in chosen] + [row]) > len(chosen):
            chosen.append(i)
            if len(chosen) == d:
                break
    if len(chosen) < d:
        raise InvariantError("cone is not pointed (constraint matrix lacks full column rank)")
    # columns of the inverse of the chosen square block are the initial rays
    inverse_cols = []
    for c in range(d):
        e = [Fraction(int(r == c)) for r in range(d)]
        sol = particular_solution([M[i] for i in chosen], e, d)
        inverse_cols.append(primitive_integer(sol))
    all_bits = 0
    for i in chosen:
        all_bits |= 1 << i
    rays = [(r, all_bits & ~(1 << chosen[c])) for c, r in enumerate(inverse_cols)]

    for i, a in enumerate(M):
        if i in chosen:
            continue
        bit = 1 << i
        plus, zero, minus = [], [], []
        for r, z in rays:
            s = sum(x * y for x, y in zip(a, r))
            (plus if s > 0 else zero if s == 0 else minus).append((r, z, s))
        new = []
        for rp, zp, sp in plus:
            for rn, zn, sn in minus:
                common = zp & zn
                if common.bit_count() < d - 2:
                    continue
                adjacent = True
                for r, z in rays:
                    if r is not rp and r is not rn and (z & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vec = primitive_integer([sp * y - sn * x for x, y in zip(rp, rn)])
                new.append((vec, common | bit))
        rays = ([(r, z) for r, z, _ in plus] + [(r, z | bit) for r, z, _ in zero] + new)
    return [r for r, _ in rays]


def enumerate_vertices(system: ConstraintSystem, cap: int | None = None) -> list[Vertex]:
    cap = DEFAULT_VERTEX_CAP if cap is None else cap
    n = system.n_vars
    if n > cap:
        raise CapExceededError(f"2N={n} exceeds the vertex-enumeration cap {cap}; raise --vertex-cap "
                               "or use the interior-point (LP-only) path")
    if not is_nonempty(system):
        return []
    eqs = system.equalities()
    z0 = particular_solution([r.coeffs for r in eqs], [r.rhs for r in eqs], n)
    if z0 is None:
        return []
    basis = nullspace([r.coeffs for r in eqs], n)
    # parametrize z = z0 + sum_i y_i basis_i; homogenize with t >= 0
    M = []
    for r in system.inequalities():
        a = [dot(r.coeffs, b) for b in basis]
        slack0 = r.value(z0) - r.rhs
        if not any(a):
            if slack0 < 0:
                return []
            continue
        M.append(primitive_integer(a + [slack0]))
    M.append(tuple([0] * len(basis) + [1]))
    rays = double_description(M)

    bound = Fraction(system.N * system.m + 1)
    verts = set()
    for ray in rays:
        t = ray[-1]
        if t == 0:
            raise InvariantError("polytope is unbounded")
        y = [Fraction(v, t) for v in ray[:-1]]
        z = tuple(z0[i] + sum((y[j] * basis[j][i] for j in range(len(basis))), Fraction(0)) for i in range(n))
        verts.add(z)
    out = []
    for z in sorted(verts):
        status, bad = feasible(system, z)
        if status != SATISFIES_ALL:
            raise InvariantError(f"enumerated vertex violates {bad}")
        if any(abs(c) > bound for c in z):
            raise InvariantError(f"vertex coordinate escapes the bound {bound}")
        tight = tuple(r.id for r in system.rows if r.value(z) == r.rhs) + tuple(r.id for r in system.extra_equalities)
        normals = [system.row(t).coeffs for t in tight]
        if rank(normals) != n:
            raise InvariantError("tight set of a vertex does not have full rank")
        out.append(Vertex(z, tight))
    return out


def chebyshev_like_interior_point(system: ConstraintSystem) -> InteriorPoint | None:
    """Maximize the least slack over the non-constant inequality rows.

    Rows whose normal lies in the span of the equality normals are constant
    on the affine hull (e.g. the empty-flat subspace row, which duplicates
    scaling) and are excluded. Returns None when the best attainable slack
    is not positive, i.e. the polytope is empty or has empty relative
    interior.
    """
    n = system.n_vars
    eqs = system.equalities()
    tester = SpanTester([r.coeffs for r in eqs], n)
    active = [r for r in system.inequalities() if not r.trivial and not tester.contains(r.coeffs)]
    if not active:
        return None
    A = [tuple(r.coeffs) + (Fraction(-1),) for r in active]
    b = [r.rhs for r in active]
    # cap the slack variable so a degenerate system cannot make the LP unbounded
    A.append((Fraction(0),) * n + (Fraction(-1),))
    b.append(Fraction(-1))
    C = [tuple(r.coeffs) + (Fraction(0),) for r in eqs]
    d = [r.rhs for r in eqs]
    res = solve_lp([0] * n + [1], A, b, C, d)
    if res.status == UNBOUNDED:
        raise InvariantError("interior-point LP is unbounded")
    if res.status != OPTIMAL or res.value <= 0:
        return None
    z = res.x[:n]
    slack = min(r.value(z) - r.rhs for r in active)
    if slack < res.value or feasible(system, z)[0] != SATISFIES_ALL:
        raise InvariantError("interior-point certificate failed re-evaluation")
    return InteriorPoint(z, slack)
