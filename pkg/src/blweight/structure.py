"""Vector configurations, genericity, and matroid flats.

Indices are 0-based throughout the Python API. Reports and the CLI label
vectors 1-based (v1, ..., vN).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import CapExceededError, InputError, PreconditionError
from .exact_linalg import SpanTester, Vector, as_vector, rank

DEFAULT_FLAT_CAP = int(os.environ.get("BLWEIGHT_FLAT_CAP", 16))


@dataclass(frozen=True)
class VectorSet:
    m: int
    k: int
    vectors: tuple[Vector, ...]

    def __post_init__(self):
        vecs = tuple(as_vector(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        if self.m < 1:
            raise InputError("ambient dimension m must be >= 1")
        if self.k < 1:
            raise InputError("block dimension k must be >= 1")
        if not vecs:
            raise InputError("a vector set needs at least one vector")
        for i, v in enumerate(vecs):
            if len(v) != self.m:
                raise InputError(f"vector {i} has length {len(v)}, expected m={self.m}")
            if not any(v):
                raise InputError(f"zero vector at index {i}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], k: int = 1) -> "VectorSet":
        rows = [as_vector(r) for r in rows]
        if not rows:
            raise InputError("a vector set needs at least one vector")
        return cls(m=len(rows[0]), k=k, vectors=tuple(rows))

    @property
    def N(self) -> int:
        return len(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def collinear_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in combinations(range(self.N), 2)
                if rank([self.vectors[i], self.vectors[j]]) < 2]

    def require_noncollinear(self) -> None:
        pairs = self.collinear_pairs()
        if pairs:
            i, j = pairs[0]
            raise PreconditionError(f"vectors {i} and {j} are collinear; "
                                    "the necessity conditions assume no collinear pair")

    def permuted(self, perm: Sequence[int]) -> "VectorSet":
        return VectorSet(self.m, self.k, tuple(self.vectors[p] for p in perm))

    def appended(self, v: Sequence) -> "VectorSet":
        return VectorSet(self.m, self.k, self.vectors + (as_vector(v),))


@dataclass(frozen=True, order=True)
class Flat:
    rank: int
    members: tuple[int, ...] = field(default=())

    def __contains__(self, j: int) -> bool:
        return j in self.members

    def complement(self, n: int) -> tuple[int, ...]:
        s = set(self.members)
        return tuple(j for j in range(n) if j not in s)

    def label(self) -> str:
        return "{" + ",".join(str(j + 1) for j in self.members) + "}"


def is_generic(E: VectorSet) -> bool:
    """Every m-subset of E is a basis (or, when N < m, E is independent)."""
    if E.N < E.m:
        return rank(E.vectors) == E.N
    return all(rank([E.vectors[j] for j in K]) == E.m for K in combinations(range(E.N), E.m))


def extend_generic(E: VectorSet) -> Vector:
    """First moment-curve point (1, t, ..., t^(m-1)), t = 1, 2, ..., keeping E generic."""
    if not is_generic(E):
        raise PreconditionError("extend_generic needs a generic set")
    size = min(E.m - 1, E.N)
    testers = [SpanTester([E.vectors[j] for j in K], E.m) for K in combinations(range(E.N), size)]
    t = 1
    # each hyperplane meets the moment curve in at most m-1 points
    while True:
        cand = tuple(Fraction(t) ** i for i in range(E.m))
        if not any(tt.contains(cand) for tt in testers):
            return cand
        t += 1


def closure(S: Iterable[int], E: VectorSet) -> Flat:
    S = sorted(set(S))
    for j in S:
        if not 0 <= j < E.N:
            raise InputError(f"index {j} out of range for N={E.N}")
    tester = SpanTester([E.vectors[j] for j in S], E.m)
    members = tuple(i for i in range(E.N) if i in S or tester.contains(E.vectors[i]))
    return Flat(rank=tester.dim, members=members)


def enumerate_flats(E: VectorSet, cap: int | None = None) -> list[Flat]:
    """All flats of E, sorted by (rank, members)."""
    cap = DEFAULT_FLAT_CAP if cap is None else cap
    if E.N > cap:
        raise CapExceededError(f"N={E.N} exceeds the flat-enumeration cap {cap}; "
                               "raise it with --flat-cap or BLWEIGHT_FLAT_CAP")
    found = set()
    for size in range(min(E.m, E.N) + 1):
        for S in combinations(range(E.N), size):
            found.add(closure(S, E))
    return sorted(found)


def brute_force_flats(E: VectorSet) -> list[Flat]:
    """Close every one of the 2^N subsets. Test oracle for :func:`enumerate_flats`."""
    found = set()
    for mask in range(1 << E.N):
        found.add(closure([j for j in range(E.N) if mask >> j & 1], E))
    return sorted(found)
