"""Test-function specifications and the exact auxiliary vector construction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import InputError, InvariantError, PreconditionError
from ..exact_linalg import SpanTester, Vector, as_vector, dot, project_orthogonal

KIND_CODES = {"shell": 0, "fixed_annulus": 0, "translated_ball": 1, "dyadic_series": 2}


def _independent(rows: Sequence[Sequence[Fraction]]) -> list[Vector]:
    if not rows:
        return []
    tester = SpanTester([], len(rows[0]))
    out = []
    for r in rows:
        if not tester.contains(r):
            out.append(as_vector(r))
            tester = SpanTester(out, len(r))
    return out


def find_w(V_basis: Sequence[Sequence], W_basis: Sequence[Sequence] | None,
           vectors: Sequence[Sequence], m: int | None = None) -> Vector:
    """A vector w in W and orthogonal to V with ``w . v != 0`` for every listed v.

    ``W_basis=None`` means W = Q^m. Inductive construction: start from the
    V-orthogonal part of the first vector; whenever the current w is
    orthogonal to the next vector v, replace it by ``c*w + perp(v)`` with
    ``c = (1 + max|perp(v).v_i|) / min|w.v_i|`` over the vectors handled so
    far, which keeps all earlier dot products at least 1 in size.
    """
    rows = list(V_basis) + list(W_basis or []) + list(vectors)
    if m is None:
        if not rows:
            raise InputError("cannot infer the ambient dimension")
        m = len(rows[0])
    V = _independent([as_vector(v) for v in V_basis])
    vectors = [as_vector(v) for v in vectors]
    in_V = SpanTester(V, m)
    if W_basis is not None:
        in_W = SpanTester([as_vector(w) for w in W_basis], m)
        for v in V:
            if not in_W.contains(v):
                raise PreconditionError("V is not contained in W")
    else:
        in_W = None
    for i, v in enumerate(vectors):
        if in_V.contains(v):
            raise PreconditionError(f"vector {i} lies in V")
        if in_W is not None and not in_W.contains(v):
            raise PreconditionError(f"vector {i} lies outside W")
    if not vectors:
        return tuple(Fraction(0) for _ in range(m))

    w = project_orthogonal(vectors[0], V)
    for a in range(1, len(vectors)):
        v = vectors[a]
        if dot(w, v) != 0:
            continue
        vp = project_orthogonal(v, V)
        big = max(abs(dot(vp, vectors[j])) for j in range(a))
        small = min(abs(dot(w, vectors[j])) for j in range(a))
        c = (1 + big) / small
        w = tuple(c * wi + pi for wi, pi in zip(w, vp))
    if any(dot(w, v) == 0 for v in vectors):
        raise InvariantError("constructed w is orthogonal to a listed vector")
    return w


@dataclass(frozen=True)
class TestFunctionSpec:
    """One radial test function on R^k.

    ``shell``: indicator of c1*scale <= |y| <= c2*scale.
    ``fixed_annulus``: indicator of c1 <= |y| <= c2.
    ``translated_ball``: indicator of |y - center| <= radius.
    ``dyadic_series``: sum over 1 <= l <= terms of
    ``l**(-a_exponent) * 2**(-l*exponent)`` on 2**l <= |y| < 2**(l+1).
    """

    __test__ = False  # not a pytest class

    kind: str
    c1: float = 0.0
    c2: float = 0.0
    scale: float = 1.0
    center: tuple[float, ...] = ()
    radius: float = 0.0
    exponent: float = 0.0
    a_exponent: float = 0.0
    terms: int = 0

    def __post_init__(self):
        if self.kind not in KIND_CODES:
            raise InputError(f"unknown test function kind {self.kind!r}")
        if self.kind in ("shell", "fixed_annulus") and not 0 < self.c1 < self.c2:
            raise InputError(f"annulus needs 0 < c1 < c2, got c1={self.c1}, c2={self.c2}")
        if self.kind == "shell" and not self.scale > 0:
            raise InputError("shell scale must be positive")
        if self.kind == "translated_ball" and not self.radius > 0:
            raise InputError("ball radius must be positive")
        if self.kind == "dyadic_series" and self.terms < 1:
            raise InputError("dyadic series needs at least one term")

    def kernel_params(self, k: int) -> tuple[int, list[float]]:
        code = KIND_CODES[self.kind]
        if self.kind == "shell":
            return code, [self.c1 * self.scale, self.c2 * self.scale]
        if self.kind == "fixed_annulus":
            return code, [self.c1, self.c2]
        if self.kind == "translated_ball":
            if len(self.center) != k:
                raise InputError(f"ball center has dimension {len(self.center)}, expected k={k}")
            return code, [self.radius, *self.center]
        return code, [self.exponent, self.a_exponent, float(self.terms)]

    def radii(self) -> tuple[float, float]:
        if self.kind == "shell":
            return self.c1 * self.scale, self.c2 * self.scale
        return self.c1, self.c2


def sphere_area(k: int) -> float:
    """Surface measure of the unit sphere in R^k (2 for k = 1)."""
    return 2 * math.pi ** (k / 2) / math.gamma(k / 2)


def _radial_integral(a: float, b: float, power: float, k: int) -> float:
    # integral over a <= |y| <= b of |y|^power in R^k
    e = power + k
    if e == 0:
        return sphere_area(k) * math.log(b / a)
    return sphere_area(k) * (b ** e - a ** e) / e


def weighted_norm(spec: TestFunctionSpec, p_inv: float, lam: float, k: int, samples: int = 1 << 15) -> float:
    """``|| |y|^lam f ||_{L^p(R^k)}`` for a test function, with ``p_inv = 1/p``."""
    if spec.kind in ("shell", "fixed_annulus"):
        a, b = spec.radii()
        if p_inv == 0:
            return max(a ** lam, b ** lam)
        return _radial_integral(a, b, lam / p_inv, k) ** p_inv
    if spec.kind == "translated_ball":
        c = np.asarray(spec.center, dtype=float)
        r = spec.radius
        if np.linalg.norm(c) <= r and lam < 0:
            return math.inf
        if k == 1:
            lo, hi = c[0] - r, c[0] + r
            if p_inv == 0:
                return max(abs(lo) ** lam, abs(hi) ** lam)
            q = lam / p_inv
            if lo > 0 or hi < 0:
                lo, hi = sorted((abs(lo), abs(hi)))
                val = math.log(hi / lo) if q == -1 else (hi ** (q + 1) - lo ** (q + 1)) / (q + 1)
            else:
                val = sum(t ** (q + 1) / (q + 1) for t in (abs(lo), abs(hi)))
            return val ** p_inv
        rng = np.random.default_rng(0)
        pts = rng.normal(size=(samples, k))
        pts *= (r * rng.uniform(size=(samples, 1)) ** (1 / k)) / np.linalg.norm(pts, axis=1, keepdims=True)
        rad = np.linalg.norm(pts + c, axis=1)
        vol = math.pi ** (k / 2) / math.gamma(k / 2 + 1) * r ** k
        if p_inv == 0:
            return float(np.max(rad ** lam))
        return float(vol * np.mean(rad ** (lam / p_inv))) ** p_inv
    # dyadic series: each dyadic shell contributes a_l^p * const
    if p_inv == 0:
        raise InputError("dyadic series norm needs p < infinity")
    p = 1 / p_inv
    e = lam * p + k
    shell = sphere_area(k) * (math.log(2) if e == 0 else (2 ** e - 1) / e)
    ell = np.arange(1, spec.terms + 1, dtype=float)
    # amplitude^p * 2^(-l p (k/p + lam)) * 2^(l e) * shell with exponent = k/p + lam
    coef = ell ** (-spec.a_exponent * p) * 2.0 ** (ell * (e - p * spec.exponent))
    return float(shell * coef.sum()) ** p_inv


def tensor_with_unit(w: Sequence[float], k: int) -> np.ndarray:
    """``w (x) e_1`` flattened as (w_1 u, ..., w_m u) in R^(mk)."""
    out = np.zeros(len(w) * k)
    out[::k] = np.asarray(w, dtype=float)
    return out


def orthonormal_frame(V_basis: Sequence[Sequence], m: int) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases (as columns) of V and of its orthogonal complement in R^m."""
    d = len(V_basis)
    if d == 0:
        return np.zeros((m, 0)), np.eye(m)
    A = np.array([[float(x) for x in v] for v in V_basis]).T
    q, _ = np.linalg.qr(np.hstack([A, np.eye(m)]))
    return q[:, :d], q[:, d:m]


def lift_frame(Q: np.ndarray, k: int) -> np.ndarray:
    """Columns q (x) e_c of R^m (x) R^k for each column q of Q and c < k."""
    m, d = Q.shape
    out = np.zeros((m * k, d * k))
    for a in range(d):
        for c in range(k):
            out[c::k, a * k + c] = Q[:, a]
    return out


def span_basis(vectors: Sequence[Sequence[Fraction]]) -> list[Vector]:
    """An independent subfamily of ``vectors`` spanning the same space."""
    return _independent(vectors)



