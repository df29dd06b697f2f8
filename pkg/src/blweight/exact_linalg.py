"""Exact linear algebra over the rationals.

Vectors are tuples of :class:`fractions.Fraction`; matrices are sequences of
such tuples (one tuple per row). Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError, PreconditionError

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]
Matrix = Sequence[Vector]


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise InputError(f"refusing float {value!r}; use an exact rational")
    return Fraction(value)


def as_vector(values: Iterable) -> Vector:
    return tuple(as_rational(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise InputError(f"dimension mismatch: {len(u)} != {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _check_width(rows: Matrix, width: int | None = None) -> int:
    widths = {len(r) for r in rows}
    if width is not None:
        widths.add(width)
    if len(widths) > 1:
        raise InputError(f"ragged matrix or dimension mismatch: widths {sorted(widths)}")
    return widths.pop() if widths else (width or 0)


def _pivot_key(x: Fraction) -> int:
    return abs(x.numerator).bit_length()


def row_echelon(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of ``rows``.

    Returns the nonzero reduced rows and their pivot columns. Pivots are
    chosen as the entry of largest numerator bit-length in the column; the
    result (being the RREF) does not depend on that choice.
    """
    width = _check_width(rows)
    work = [list(map(as_rational, r)) for r in rows]
    pivots: list[int] = []
    top = 0
    for col in range(width):
        if top == len(work):
            break
        best = None
        for i in range(top, len(work)):
            if work[i][col] != 0 and (best is None or _pivot_key(work[i][col]) > _pivot_key(work[best][col])):
                best = i
        if best is None:
            continue
        work[top], work[best] = work[best], work[top]
        prow = work[top]
        inv = 1 / prow[col]
        for c in range(col, width):
            prow[c] *= inv
        for i, row in enumerate(work):
            if i != top and row[col] != 0:
                f = row[col]
                for c in range(col, width):
                    row[c] -= f * prow[c]
        pivots.append(col)
        top += 1
    return work[:top], pivots


def rank(rows: Matrix) -> int:
    """Dimension of the row span of ``rows``."""
    if not rows:
        return 0
    return len(row_echelon(rows)[0])


class SpanTester:
    """Reusable membership oracle for the row span of a fixed set of vectors."""

    def __init__(self, rows: Matrix, width: int):
        _check_width(rows, width)
        self.width = width
        self.basis, self.pivots = row_echelon(rows) if rows else ([], [])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def residual(self, v: Sequence[Fraction]) -> list[Fraction]:
        if len(v) != self.width:
            raise InputError(f"dimension mismatch: {len(v)} != {self.width}")
        r = list(map(as_rational, v))
        for prow, col in zip(self.basis, self.pivots):
            f = r[col]
            if f:
                for c in range(col, self.width):
                    r[c] -= f * prow[c]
        return r

    def contains(self, v: Sequence[Fraction]) -> bool:
        return not any(self.residual(v))


def in_span(v: Sequence[Fraction], basis_rows: Matrix) -> bool:
    """True iff ``v`` lies in the row span of ``basis_rows`` (the empty span is {0})."""
    return SpanTester(list(basis_rows), len(v)).contains(v)


def _solve_square(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(a)
    aug = [list(map(as_rational, row)) + [as_rational(rhs)] for row, rhs in zip(a, b)]
    red, piv = row_echelon(aug)
    if piv[:n] != list(range(n)) or len(piv) != n:
        return None
    return [red[i][n] for i in range(n)]


def solve_in_span(target: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Coefficients expressing ``target`` in the linearly independent ``vectors``.

    Raises :class:`PreconditionError` if the vectors are dependent or the
    target is not in their span.
    """
    width = len(target)
    _check_width(vectors, width)
    n = len(vectors)
    if n == 0:
        if any(target):
            raise PreconditionError("target is not in the span of an empty family")
        return []
    if rank(vectors) != n:
        raise PreconditionError("vectors are linearly dependent")
    # columns are the vectors: solve sum_j c_j vectors[j] = target
    aug = [[as_rational(vectors[j][i]) for j in range(n)] + [as_rational(target[i])] for i in range(width)]
    red, piv = row_echelon(aug)
    if n in piv:
        raise PreconditionError("target is not in the span of the given vectors")
    coeffs = [Fraction(0)] * n
    for row, col in zip(red, piv):
        coeffs[col] = row[n]
    return coeffs


def solve_in_basis(target: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Unique coefficients ``alpha`` with ``target == sum(alpha_j * basis[j])``.

    ``basis`` must consist of exactly m independent vectors of Q^m.
    """
    m = len(target)
    _check_width(basis, m)
    if len(basis) != m or rank(basis) != m:
        raise PreconditionError("not a basis")
    return solve_in_span(target, basis)


def combine(coeffs: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], width: int) -> Vector:
    out = [Fraction(0)] * width
    for c, v in zip(coeffs, vectors):
        if c:
            for i in range(width):
                out[i] += c * v[i]
    return tuple(out)


def project_orthogonal(v: Sequence[Fraction], subspace_basis: Sequence[Sequence[Fraction]]) -> Vector:
    """Component of ``v`` orthogonal to ``span(subspace_basis)``.

    Solves the Gram system exactly; the basis must be independent.
    """
    v = as_vector(v)
    width = len(v)
    _check_width(subspace_basis, width)
    n = len(subspace_basis)
    if n == 0:
        return v
    gram = [[dot(a, b) for b in subspace_basis] for a in subspace_basis]
    rhs = [dot(a, v) for a in subspace_basis]
    coeffs = _solve_square(gram, rhs)
    if coeffs is None:
        raise PreconditionError("subspace basis is linearly dependent")
    proj = combine(coeffs, subspace_basis, width)
    return tuple(a - b for a, b in zip(v, proj))


def nullspace(rows: Matrix, width: int) -> list[Vector]:
    """A basis of {z : rows @ z = 0}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(width)) for j in range(width)]
    _check_width(rows, width)
    red, piv = row_echelon(rows)
    free = [c for c in range(width) if c not in piv]
    basis = []
    for f in free:
        z = [Fraction(0)] * width
        z[f] = Fraction(1)
        for row, col in zip(red, piv):
            z[col] = -row[f]
        basis.append(tuple(z))
    return basis


def particular_solution(rows: Matrix, rhs: Sequence[Fraction], width: int) -> Vector | None:
    """Some z with rows @ z == rhs, or None when the system is inconsistent."""
    if not rows:
        return tuple(Fraction(0) for _ in range(width))
    _check_width(rows, width)
    aug = [list(r) + [as_rational(b)] for r, b in zip(rows, rhs)]
    red, piv = row_echelon(aug)
    if width in piv:
        return None
    z = [Fraction(0)] * width
    for row, col in zip(red, piv):
        z[col] = row[width]
    return tuple(z)


def primitive_integer(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive rational multiple of ``v`` with coprime integer entries."""
    from math import gcd, lcm

    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)
