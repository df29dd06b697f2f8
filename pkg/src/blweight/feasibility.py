"""Exact checks of the sufficient and necessary index conditions.

Every quantification over subspaces V of R^m is discharged over the flats of
E. A subspace V induces the flat S = {j : v_j in V}, and every V inducing S
has dim V >= rank(S); the right-hand sides ``m - dim V`` are largest at the
smallest admissible dimension, so each condition is checked at
``dim V = max(rank(S), floor)`` with ``floor = 1`` for nonzero proper
subspaces and ``floor = 0`` otherwise. That dimension is attained by
``span(S)`` (or by a line avoiding E when S is empty).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import InputError, InvariantError, PreconditionError
from .exact_linalg import as_vector
from .structure import Flat, VectorSet, enumerate_flats, is_generic

SUFFICIENT_INTERIOR = "sufficient_interior"
NECESSARY_ONLY = "necessary_only"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class IndexVector:
    """Exponent data: ``p_inv[j] = 1/p_j`` and ``lam[j] = lambda_j``."""

    p_inv: tuple[Fraction, ...]
    lam: tuple[Fraction, ...]
    k: int = 1

    def __post_init__(self):
        object.__setattr__(self, "p_inv", as_vector(self.p_inv))
        object.__setattr__(self, "lam", as_vector(self.lam))
        if len(self.p_inv) != len(self.lam):
            raise InputError(f"p_inv has {len(self.p_inv)} entries but lambda has {len(self.lam)}")
        if self.k < 1:
            raise InputError("k must be >= 1")

    @property
    def N(self) -> int:
        return len(self.p_inv)

    def weights(self) -> tuple[Fraction, ...]:
        """The per-vector quantities 1/p_j + lambda_j / k."""
        return tuple(x + l / self.k for x, l in zip(self.p_inv, self.lam))

    def with_lambda(self, lam: Sequence[Fraction]) -> "IndexVector":
        return IndexVector(self.p_inv, tuple(lam), self.k)

    def permuted(self, perm: Sequence[int]) -> "IndexVector":
        return IndexVector(tuple(self.p_inv[p] for p in perm), tuple(self.lam[p] for p in perm), self.k)


@dataclass(frozen=True)
class Violation:
    constraint: str
    where: tuple[int, ...] | int | None
    lhs: Fraction
    relation: str
    rhs: Fraction

    def where_label(self) -> str:
        if self.where is None:
            return "-"
        if isinstance(self.where, int):
            return f"v{self.where + 1}"
        return "{" + ",".join(str(j + 1) for j in self.where) + "}"


@dataclass
class Verdict:
    """Outcome of one checklist, sufficient or necessary.

    ``generic`` is only populated for the sufficiency check; the index
    violations are reported separately from genericity so that non-generic
    configurations still show which index conditions hold.
    """

    checklist: str
    violations: list[Violation] = field(default_factory=list)
    generic: bool | None = None

    @property
    def index_conditions_hold(self) -> bool:
        return not self.violations

    @property
    def passed(self) -> bool:
        return not self.violations and self.generic is not False


@dataclass
class Classification:
    status: str
    sufficient: Verdict
    necessary: Verdict | None


def _check_sizes(E: VectorSet, ix: IndexVector) -> None:
    if E.N != ix.N:
        raise InputError(f"vector set has N={E.N} but index vector has N={ix.N}")


def _flats(E: VectorSet, flats: Sequence[Flat] | None) -> Sequence[Flat]:
    return enumerate_flats(E) if flats is None else flats


def _sum_outside(values: Sequence[Fraction], members: Sequence[int]) -> Fraction:
    inside = set(members)
    return sum((v for j, v in enumerate(values) if j not in inside), Fraction(0))


def check_scaling(E: VectorSet, ix: IndexVector) -> tuple[bool, Fraction]:
    _check_sizes(E, ix)
    residual = sum(ix.weights(), Fraction(0)) - E.m
    return residual == 0, residual


def check_subspace_strict(E: VectorSet, ix: IndexVector, flats: Sequence[Flat] | None = None) -> list[Violation]:
    """Strict inequality over nonzero proper subspaces, evaluated per flat."""
    _check_sizes(E, ix)
    w = ix.weights()
    out = []
    for F in _flats(E, flats):
        dim = max(F.rank, 1)
        if dim > E.m - 1:
            continue
        lhs = _sum_outside(w, F.members)
        rhs = Fraction(E.m - dim)
        if not lhs > rhs:
            out.append(Violation("subspace_strict", F.members, lhs, ">", rhs))
    return out


def check_subspace(E: VectorSet, ix: IndexVector, flats: Sequence[Flat] | None = None) -> list[Violation]:
    """Non-strict inequality over all subspaces (including {0} and R^m)."""
    _check_sizes(E, ix)
    w = ix.weights()
    out = []
    for F in _flats(E, flats):
        lhs = _sum_outside(w, F.members)
        rhs = Fraction(E.m - F.rank)
        if not lhs >= rhs:
            out.append(Violation("subspace", F.members, lhs, ">=", rhs))
    return out


def check_lambda_nonneg(E: VectorSet, ix: IndexVector, flats: Sequence[Flat] | None = None) -> list[Violation]:
    _check_sizes(E, ix)
    out = []
    for F in _flats(E, flats):
        lhs = _sum_outside(ix.lam, F.members)
        if lhs < 0:
            out.append(Violation("lambda", F.members, lhs, ">=", Fraction(0)))
    return out


def check_integrability(ix: IndexVector) -> bool:
    return sum(ix.p_inv, Fraction(0)) >= 1


def _integrability_violation(ix: IndexVector) -> list[Violation]:
    total = sum(ix.p_inv, Fraction(0))
    return [] if total >= 1 else [Violation("integrability", None, total, ">=", Fraction(1))]


def _scaling_violation(E: VectorSet, ix: IndexVector) -> list[Violation]:
    ok, residual = check_scaling(E, ix)
    return [] if ok else [Violation("scaling", None, residual + E.m, "=", Fraction(E.m))]


def _box_violations(ix: IndexVector, open_box: bool) -> list[Violation]:
    out = []
    for j, x in enumerate(ix.p_inv):
        if open_box:
            if not 0 < x:
                out.append(Violation("open_box", j, x, ">", Fraction(0)))
            if not x < 1:
                out.append(Violation("open_box", j, x, "<", Fraction(1)))
        else:
            if x < 0:
                out.append(Violation("closed_box", j, x, ">=", Fraction(0)))
            if x > 1:
                out.append(Violation("closed_box", j, x, "<=", Fraction(1)))
    return out


def sufficient_index_violations(E: VectorSet, ix: IndexVector, flats: Sequence[Flat] | None = None) -> list[Violation]:
    """All index conditions of the sufficient checklist (genericity excluded)."""
    flats = _flats(E, flats)
    return (_box_violations(ix, open_box=True)
            + _scaling_violation(E, ix)
            + check_subspace_strict(E, ix, flats)
            + check_lambda_nonneg(E, ix, flats)
            + _integrability_violation(ix))


def check_sufficient(E: VectorSet, ix: IndexVector, flats: Sequence[Flat] | None = None) -> Verdict:
    _check_sizes(E, ix)
    flats = _flats(E, flats)
    verdict = Verdict("sufficient", sufficient_index_violations(E, ix, flats), generic=is_generic(E))
    if verdict.passed and E.m >= 2:
        # consequence of scaling + the strict condition at each line R v_j
        for j, s in enumerate(ix.weights()):
            if not s < 1:
                raise InvariantError(f"1/p_j + lambda_j/k = {s} >= 1 at j={j} despite passing sufficiency")
    return verdict


def check_necessary(E: VectorSet, ix: IndexVector, flats: Sequence[Flat] | None = None) -> Verdict:
    _check_sizes(E, ix)
    E.require_noncollinear()
    flats = _flats(E, flats)
    violations = (_box_violations(ix, open_box=False)
                  + _scaling_violation(E, ix)
                  + check_subspace(E, ix, flats)
                  + check_lambda_nonneg(E, ix, flats)
                  + _integrability_violation(ix))
    return Verdict("necessary", violations)


def classify(E: VectorSet, ix: IndexVector, flats: Sequence[Flat] | None = None) -> Classification:
    """Three-way status. Non-generic E is never ``sufficient_interior``."""
    flats = _flats(E, flats)
    suff = check_sufficient(E, ix, flats)
    try:
        nec = check_necessary(E, ix, flats)
    except PreconditionError:
        # collinear pairs only occur in generic sets when m == 1
        if not suff.passed:
            raise
        return Classification(SUFFICIENT_INTERIOR, suff, None)
    if suff.passed:
        status = SUFFICIENT_INTERIOR
    elif nec.passed:
        status = NECESSARY_ONLY
    else:
        status = INFEASIBLE
    return Classification(status, suff, nec)


def generic_subset_check(E: VectorSet, ix: IndexVector, which: str) -> list[Violation]:
    """Subset forms of the lambda and strict conditions, valid for generic E.

    ``which="lambda"`` ranges over all K with #K <= m-1 (including the empty
    set); ``which="strict"`` over 1 <= #K <= m-1. No flats are computed.
    """
    _check_sizes(E, ix)
    if which not in ("lambda", "strict"):
        raise InputError(f"unknown subset check {which!r}")
    if not is_generic(E):
        raise PreconditionError("the subset forms require a generic vector set")
    values = ix.lam if which == "lambda" else ix.weights()
    lo = 0 if which == "lambda" else 1
    out = []
    for size in range(lo, min(E.m - 1, E.N) + 1):
        for K in combinations(range(E.N), size):
            lhs = _sum_outside(values, K)
            if which == "lambda":
                if lhs < 0:
                    out.append(Violation("lambda", K, lhs, ">=", Fraction(0)))
            else:
                rhs = Fraction(E.m - size)
                if not lhs > rhs:
                    out.append(Violation("subspace_strict", K, lhs, ">", rhs))
    return out
