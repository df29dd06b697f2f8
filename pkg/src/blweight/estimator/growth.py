"""Growth-exponent experiments built on the necessity constructions.

Each experiment sweeps a scale parameter, estimates the form on test
functions whose supports force the integrand to be 1 on a known region,
and fits log-estimate against log-scale. The exact exponent predicted by
the index vector is reported next to the measured one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import InputError, PreconditionError
from ..exact_linalg import SpanTester
from ..feasibility import IndexVector, check_scaling
from ..structure import Flat, VectorSet
from .constructions import (TestFunctionSpec, find_w, lift_frame, orthonormal_frame,
                            span_basis, tensor_with_unit, weighted_norm)
from .montecarlo import Estimate, SampleConfig, estimate_form

DEFAULT_SCALES = (1.0, 2.0, 4.0, 8.0, 16.0)
DEFAULT_SAMPLES = 10 ** 6
SLOPE_TOLERANCE = 0.1
INFLATE = 1.05


@dataclass
class GrowthFit:
    """OLS fit of ``log(estimate)`` on ``log(scale)``."""

    scales: tuple[float, ...]
    estimates: tuple[float, ...]
    stderrs: tuple[float, ...]
    slope: float
    slope_stderr: float
    intercept: float

    @property
    def log_estimates(self) -> tuple[float, ...]:
        return tuple(math.log(e) for e in self.estimates)


def fit_growth(scales: Sequence[float], estimates: Sequence[float], stderrs: Sequence[float] | None = None) -> GrowthFit:
    scales = tuple(float(s) for s in scales)
    estimates = tuple(float(e) for e in estimates)
    stderrs = tuple(0.0 for _ in scales) if stderrs is None else tuple(float(s) for s in stderrs)
    if len(scales) != len(estimates):
        raise InputError("scales and estimates differ in length")
    if len(scales) < 3:
        raise InputError(f"a growth fit needs at least 3 scale points, got {len(scales)}")
    if any(b <= a for a, b in zip(scales, scales[1:])):
        raise InputError("scales must be strictly increasing")
    if min(scales) <= 0 or min(estimates) <= 0:
        raise PreconditionError("scales and estimates must be positive to fit on a log scale")
    x = np.log(scales)
    y = np.log(estimates)
    xm, ym = x.mean(), y.mean()
    sxx = float(((x - xm) ** 2).sum())
    slope = float(((x - xm) * (y - ym)).sum() / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    dof = len(x) - 2
    se = math.sqrt(float((resid ** 2).sum()) / dof / sxx) if dof > 0 else 0.0
    return GrowthFit(scales, estimates, stderrs, slope, se, intercept)


@dataclass
class SlopeTestResult:
    """Measured growth of the form next to the exact exponents.

    ``geometric_exponent`` is the growth the construction forces on the
    form; ``norm_exponent`` is the growth of the product of weighted norms.
    For the scaling and subspace tests ``exact_gap = geometric - norm``
    must be <= 0 for a bounded form; for the translation test the relevant
    sign is that of ``norm_exponent`` itself.
    """

    test: str
    fit: GrowthFit
    norm_fit: GrowthFit
    geometric_exponent: Fraction
    norm_exponent: Fraction
    details: dict = field(default_factory=dict)

    @property
    def exact_gap(self) -> Fraction:
        return self.geometric_exponent - self.norm_exponent

    @property
    def measured_gap(self) -> float:
        return self.fit.slope - float(self.norm_exponent)

    def slope_matches(self, tol: float = SLOPE_TOLERANCE) -> bool:
        return abs(self.fit.slope - float(self.geometric_exponent)) <= tol


def _float_vec(v) -> np.ndarray:
    return np.array([float(x) for x in v])


def _scale_seed(seed: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, i]).generate_state(1)[0])


def _sweep(E, build, scales, samples, seed, threads, ix) -> tuple[GrowthFit, GrowthFit]:
    ests, errs, norms = [], [], []
    p_inv = [float(x) for x in ix.p_inv]
    lam = [float(x) for x in ix.lam]
    for i, R in enumerate(scales):
        specs, center, frame, widths = build(R)
        cfg = SampleConfig(samples, _scale_seed(seed, i), tuple(center), float(max(widths)),
                           frame=frame, half_widths=tuple(widths), threads=threads)
        est: Estimate = estimate_form(E, specs, cfg)
        ests.append(est.value)
        errs.append(est.stderr)
        norms.append(math.prod(weighted_norm(s, p, l, E.k) for s, p, l in zip(specs, p_inv, lam)))
    return fit_growth(scales, ests, errs), fit_growth(scales, norms)


def _shell_bounds(dot_abs: float, length: float, eps: float, slack: float = 0.0) -> tuple[float, float]:
    return dot_abs - length * eps - slack, dot_abs + length * eps + slack


def scaling_slope_test(E: VectorSet, ix: IndexVector, scales: Sequence[float] = DEFAULT_SCALES,
                       samples: int = DEFAULT_SAMPLES, seed: int = 0, threads: int = 1) -> SlopeTestResult:
    """Shells ``c1 R <= |y| <= c2 R`` around a ball of radius eps*R at R*w (x) u."""
    k, m = E.k, E.m
    w = find_w([], None, E.vectors, m=m)
    wf = _float_vec(w)
    lengths = [float(np.linalg.norm(_float_vec(v))) for v in E.vectors]
    dots = [abs(float(np.dot(_float_vec(v), wf))) for v in E.vectors]
    eps = min(dots) / (4 * max(lengths))
    bounds = [_shell_bounds(d, L, eps) for d, L in zip(dots, lengths)]
    base = tensor_with_unit(wf, k)

    def build(R):
        specs = [TestFunctionSpec("shell", c1=a, c2=b, scale=R) for a, b in bounds]
        return specs, R * base, None, [INFLATE * eps * R] * (m * k)

    fit, norm_fit = _sweep(E, build, scales, samples, seed, threads, ix)
    norm_exp = sum((k * x + l for x, l in zip(ix.p_inv, ix.lam)), Fraction(0))
    return SlopeTestResult("scaling", fit, norm_fit, Fraction(m * k), norm_exp,
                           {"w": w, "epsilon": eps, "shell_bounds": bounds,
                            "scaling_residual": check_scaling(E, ix)[1]})


def _flat_split(E: VectorSet, flat: Flat):
    if flat.rank >= E.m:
        raise PreconditionError(f"flat {flat.label()} spans R^{E.m}; no scaling direction")
    inside = [j for j in range(E.N) if j in flat.members]
    outside = [j for j in range(E.N) if j not in flat.members]
    V = span_basis([E.vectors[j] for j in inside])
    tester = SpanTester(V, E.m)
    if any(tester.contains(E.vectors[j]) for j in outside):
        raise InputError(f"{flat.label()} is not a flat of the vector set")
    return inside, outside, V


def _mixed_construction(E: VectorSet, flat: Flat):
    """w1 in V avoiding the inside vectors; w2 in V-perp avoiding the outside ones."""
    inside, outside, V = _flat_split(E, flat)
    w1 = find_w([], V, [E.vectors[j] for j in inside], m=E.m) if inside else tuple(Fraction(0) for _ in range(E.m))
    w2 = find_w(V, None, [E.vectors[j] for j in outside], m=E.m)
    return inside, outside, V, w1, w2


def subspace_slope_test(E: VectorSet, ix: IndexVector, flat: Flat, scales: Sequence[float] | None = None,
                        samples: int = DEFAULT_SAMPLES, seed: int = 0, threads: int = 1) -> SlopeTestResult:
    """Fixed annuli on V, shells off V; region is a small ball in V plus a growing one in V-perp.

    ``scales=None`` uses ``R0 * 2^i`` for i = 0..4, with R0 the least power
    of 2 for which the shell bounds stay valid for every R >= R0.
    """
    k, m = E.k, E.m
    inside, outside, V, w1, w2 = _mixed_construction(E, flat)
    w1f, w2f = _float_vec(w1), _float_vec(w2)
    vecs = [_float_vec(v) for v in E.vectors]
    lengths = [float(np.linalg.norm(v)) for v in vecs]
    d_in = {j: abs(float(vecs[j] @ w1f)) for j in inside}
    d_out = {j: abs(float(vecs[j] @ w2f)) for j in outside}
    eps = min(list(d_in.values()) + list(d_out.values())) / (4 * max(lengths))
    reach = float(np.linalg.norm(w1f)) + eps
    # the V-part of x moves v_j.x by at most |v_j| * reach; absorb it for R >= R0
    need = max(4 * lengths[j] * reach / d_out[j] for j in outside)
    R0 = 2.0 ** max(0, math.ceil(math.log2(need)))
    if scales is None:
        scales = tuple(R0 * 2.0 ** i for i in range(5))
    elif min(scales) < R0:
        raise InputError(f"scales must be >= R0={R0} for the shell bounds to hold")

    bounds = {}
    for j in inside:
        bounds[j] = _shell_bounds(d_in[j], lengths[j], eps)
    for j in outside:
        bounds[j] = _shell_bounds(d_out[j], lengths[j], eps, lengths[j] * reach / R0)
    QV, QP = orthonormal_frame(V, m)
    frame = np.hstack([lift_frame(QV, k), lift_frame(QP, k)])
    a = tensor_with_unit(w1f, k)
    b = tensor_with_unit(w2f, k)
    dv, dp = len(V) * k, (m - len(V)) * k

    def build(R):
        specs = []
        for j in range(E.N):
            lo, hi = bounds[j]
            if j in d_in:
                specs.append(TestFunctionSpec("fixed_annulus", c1=lo, c2=hi))
            else:
                specs.append(TestFunctionSpec("shell", c1=lo, c2=hi, scale=R))
        widths = [INFLATE * eps] * dv + [INFLATE * eps * R] * dp
        return specs, a + R * b, frame, widths

    fit, norm_fit = _sweep(E, build, scales, samples, seed, threads, ix)
    norm_exp = sum((k * ix.p_inv[j] + ix.lam[j] for j in outside), Fraction(0))
    return SlopeTestResult("subspace", fit, norm_fit, Fraction(k * (m - len(V))), norm_exp,
                           {"flat": flat.members, "dim_V": len(V), "w1": w1, "w2": w2, "epsilon": eps,
                            "R0": R0, "w2_construction": "find_w(V, R^m, {v_j not in V}), lies in V-perp"})


def translation_test(E: VectorSet, ix: IndexVector, flat: Flat, scales: Sequence[float] | None = None,
                     samples: int = DEFAULT_SAMPLES, seed: int = 0, threads: int = 1) -> SlopeTestResult:
    """Fixed annuli on V, translated balls off V, region a fixed-size ball at (w1 + T w2) (x) u."""
    k, m = E.k, E.m
    inside, outside, V, w1, w2 = _mixed_construction(E, flat)
    w1f, w2f = _float_vec(w1), _float_vec(w2)
    vecs = [_float_vec(v) for v in E.vectors]
    lengths = [float(np.linalg.norm(v)) for v in vecs]
    dots = [abs(float(vecs[j] @ w1f)) for j in inside] + [abs(float(vecs[j] @ w2f)) for j in outside]
    eps = min(dots) / (4 * max(lengths))
    # keep every ball off the origin: |v_j.(w1 + T w2)| > 2 |v_j| eps for T >= T0
    need = max((abs(float(vecs[j] @ w1f)) + 2 * lengths[j] * eps) * 4 / abs(float(vecs[j] @ w2f)) for j in outside) if outside else 1.0
    T0 = 2.0 ** max(0, math.ceil(math.log2(need)))
    if scales is None:
        scales = tuple(T0 * 2.0 ** i for i in range(5))
    a = tensor_with_unit(w1f, k)
    b = tensor_with_unit(w2f, k)
    u = np.zeros(k)
    u[0] = 1.0

    def build(T):
        specs = []
        for j in range(E.N):
            if j in inside:
                lo, hi = _shell_bounds(abs(float(vecs[j] @ w1f)), lengths[j], eps)
                specs.append(TestFunctionSpec("fixed_annulus", c1=lo, c2=hi))
            else:
                c = float(vecs[j] @ (w1f + T * w2f)) * u
                specs.append(TestFunctionSpec("translated_ball", center=tuple(c), radius=lengths[j] * eps))
        return specs, a + T * b, None, [INFLATE * eps] * (m * k)

    fit, norm_fit = _sweep(E, build, scales, samples, seed, threads, ix)
    norm_exp = sum((ix.lam[j] for j in outside), Fraction(0))
    return SlopeTestResult("translation", fit, norm_fit, Fraction(0), norm_exp,
                           {"flat": flat.members, "dim_V": len(V), "w1": w1, "w2": w2, "epsilon": eps, "T0": T0})


@dataclass
class IntegrabilityReport:
    p_inv_sum: Fraction
    epsilon: float
    terms: int
    exponent: float
    checkpoints: tuple[tuple[int, float], ...]
    last_decade_growth: float
    increment_ratio: float
    diverging: bool
    boundary: bool
    norm_bound: float
    w: tuple[Fraction, ...]

    @property
    def verdict(self) -> str:
        return "diverging" if self.diverging else "convergent"


def integrability_test(E: VectorSet, ix: IndexVector, epsilon: float = 0.05, L: int = 1 << 12) -> IntegrabilityReport:
    """Partial sums of ``sum_l l^(-(1+eps) * sum_j 1/p_j)`` up to L.

    Under the scaling condition the 2-powers of the dyadic construction
    cancel and this series bounds the form from below. Divergence is flagged
    when the sum still grows by more than 1% between L/10 and L and that
    last increment is no smaller than the one between L/100 and L/10; the
    second clause separates slow divergence from a tail that is decaying.
    """
    ok, residual = check_scaling(E, ix)
    if not ok:
        raise PreconditionError(f"scaling condition fails (residual {residual}); the dyadic 2-powers do not cancel")
    if not epsilon > 0:
        raise InputError("epsilon must be positive")
    if L < 10:
        raise InputError("truncation L must be >= 10")
    w = find_w([], None, E.vectors, m=E.m)
    total = sum(ix.p_inv, Fraction(0))
    s = (1 + epsilon) * float(total)
    ell = np.arange(1, L + 1, dtype=float)
    partial = np.cumsum(ell ** (-s))
    marks = sorted({max(1, L // 100), max(1, L // 10), L})
    at = {n: float(partial[n - 1]) for n in marks}
    lo, mid, hi = at[marks[0]], at[marks[-2]], at[L]
    growth = (hi - mid) / mid
    prev = mid - lo
    ratio = (hi - mid) / prev if prev > 0 else math.inf
    diverging = growth > 0.01 and hi - mid >= prev
    norm_bound = float(np.sum(ell ** (-(1 + epsilon)))) ** float(total)
    return IntegrabilityReport(total, float(epsilon), L, s, tuple(at.items()), growth, ratio,
                               diverging, total == 1, norm_bound, w)
