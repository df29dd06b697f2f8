"""Exact two-phase simplex over the rationals with Bland's anti-cycling rule.

Solves ``maximize c.z`` subject to ``A_ge z >= b_ge`` and ``A_eq z = b_eq``
with every variable free (split internally as z = z+ - z-).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    pivots: int = 0


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        inv = 1 / row[c]
        if inv != 1:
            self.rows[r] = row = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i != r:
                f = other[c]
                if f:
                    self.rows[i] = [a - f * b if b else a for a, b in zip(other, row)]
                    self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c
        self.pivots += 1

    def optimize(self, cost: Sequence[Fraction], allowed: Sequence[bool]) -> str:
        """Maximize ``cost`` over the current basic feasible solution (Bland's rule)."""
        ncols = len(cost)
        while True:
            cb = [cost[b] for b in self.basis]
            entering = None
            for j in range(ncols):
                if not allowed[j] or j in self.basis:
                    continue
                reduced = cost[j] - sum((cbi * row[j] for cbi, row in zip(cb, self.rows) if row[j]), Fraction(0))
                if reduced > 0:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            leave = None
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return UNBOUNDED
            self.pivot(leave, entering)


def solve_lp(c: Sequence, A_ge: Sequence[Sequence] = (), b_ge: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    n = len(c)
    c = [Fraction(v) for v in c]
    cons = [([Fraction(v) for v in a], Fraction(b), True) for a, b in zip(A_ge, b_ge)]
    cons += [([Fraction(v) for v in a], Fraction(b), False) for a, b in zip(A_eq, b_eq)]
    n_slack = sum(1 for _, _, ge in cons if ge)
    m = len(cons)
    # columns: z+ (n), z- (n), slacks, artificials (m)
    width = 2 * n + n_slack + m
    art0 = 2 * n + n_slack
    rows, rhs, basis = [], [], []
    s = 0
    for i, (a, b, ge) in enumerate(cons):
        row = a + [-v for v in a] + [Fraction(0)] * (n_slack + m)
        if ge:
            row[2 * n + s] = Fraction(-1)
            s += 1
        if b < 0:
            row = [-v for v in row]
            b = -b
        row[art0 + i] = Fraction(1)
        rows.append(row)
        rhs.append(b)
        basis.append(art0 + i)
    tab = _Tableau(rows, rhs, basis)

    phase1 = [Fraction(0)] * art0 + [Fraction(-1)] * m
    tab.optimize(phase1, [True] * width)
    if sum((tab.rhs[i] for i, b in enumerate(tab.basis) if b >= art0), Fraction(0)) > 0:
        return LPResult(INFEASIBLE, pivots=tab.pivots)

    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= art0:
            col = next((j for j in range(art0) if tab.rows[i][j] != 0), None)
            if col is None:
                del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1

    cost = c + [-v for v in c] + [Fraction(0)] * (n_slack + m)
    allowed = [j < art0 for j in range(width)]
    status = tab.optimize(cost, allowed)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    vals = [Fraction(0)] * width
    for r, b in enumerate(tab.basis):
        vals[b] = tab.rhs[r]
    x = tuple(vals[j] - vals[n + j] for j in range(n))
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, x, value, tab.pivots)
