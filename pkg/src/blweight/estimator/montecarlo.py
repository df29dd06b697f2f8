"""Box-region Monte Carlo for the multilinear form with deterministic chunking."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import InputError
from ..structure import VectorSet
from . import backend
from .constructions import TestFunctionSpec

DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class SampleConfig:
    """Sampling region ``center + frame @ u`` with ``u`` uniform in a box.

    ``half_widths`` defaults to ``radius`` in every frame direction and
    ``frame`` to the identity. The frame must have orthonormal columns so
    the box volume is the product of the side lengths.
    """

    samples: int
    seed: int
    center: tuple[float, ...]
    radius: float
    antithetic: bool = False
    frame: np.ndarray | None = None
    half_widths: tuple[float, ...] | None = None
    chunk_size: int = DEFAULT_CHUNK
    threads: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise InputError("sample count must be >= 1")
        if not self.radius > 0:
            raise InputError("region radius must be positive")
        if self.antithetic and self.samples < 2:
            raise InputError("antithetic sampling needs at least 2 samples")
        if self.chunk_size < 2:
            raise InputError("chunk size must be >= 2")
        if self.threads < 1:
            raise InputError("thread count must be >= 1")
        d = len(self.center)
        if self.frame is not None and np.shape(self.frame) != (d, d):
            raise InputError(f"frame must be {d}x{d}")
        if self.half_widths is not None:
            if len(self.half_widths) != d or min(self.half_widths) <= 0:
                raise InputError("half widths must be positive, one per dimension")

    @property
    def dim(self) -> int:
        return len(self.center)

    def widths(self) -> np.ndarray:
        if self.half_widths is None:
            return np.full(self.dim, float(self.radius))
        return np.asarray(self.half_widths, dtype=float)

    def volume(self) -> float:
        return float(np.prod(2.0 * self.widths()))


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    samples: int
    nonzero: int


def kernel_inputs(E: VectorSet, specs: Sequence[TestFunctionSpec]):
    if len(specs) != E.N:
        raise InputError(f"{len(specs)} test functions for N={E.N} vectors")
    k = E.k
    V = np.array([[float(x) for x in v] for v in E.vectors], dtype=np.float64)
    kinds = np.zeros(E.N, dtype=np.int32)
    rows = []
    for j, s in enumerate(specs):
        kinds[j], p = s.kernel_params(k)
        rows.append(p)
    width = max(len(p) for p in rows)
    params = np.zeros((E.N, width), dtype=np.float64)
    for j, p in enumerate(rows):
        params[j, :len(p)] = p
    return V, kinds, params


def _chunk_sizes(cfg: SampleConfig) -> list[int]:
    step = cfg.chunk_size - (cfg.chunk_size % 2 if cfg.antithetic else 0)
    full, rest = divmod(cfg.samples, step)
    sizes = [step] * full + ([rest] if rest else [])
    if cfg.antithetic:
        sizes = [s - s % 2 for s in sizes if s >= 2]
    return sizes


def estimate_form(E: VectorSet, specs: Sequence[TestFunctionSpec], cfg: SampleConfig) -> Estimate:
    """Estimate the integral of ``prod_j f_j(v_j . x)`` over the sampling box.

    Each chunk draws from its own generator spawned from the master seed and
    chunk sums are reduced in chunk order, so the result does not depend on
    the thread count. With antithetic sampling the unit of the variance
    estimate is the mean of a mirrored pair.
    """
    d = E.m * E.k
    if cfg.dim != d:
        raise InputError(f"region center has dimension {cfg.dim}, expected m*k={d}")
    V, kinds, params = kernel_inputs(E, specs)
    center = np.asarray(cfg.center, dtype=float)
    h = cfg.widths()
    frame = None if cfg.frame is None else np.ascontiguousarray(cfg.frame, dtype=float)
    sizes = _chunk_sizes(cfg)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(sizes))

    def run(i: int):
        rng = np.random.Generator(np.random.PCG64(seeds[i]))
        n = sizes[i]
        if cfg.antithetic:
            u = rng.uniform(-1.0, 1.0, size=(n // 2, d))
            u = np.concatenate([u, -u])
        else:
            u = rng.uniform(-1.0, 1.0, size=(n, d))
        u *= h
        x = center + (u if frame is None else u @ frame.T)
        vals = backend.eval_product(x, V, kinds, params, E.k)
        hits = int(np.count_nonzero(vals))
        if cfg.antithetic:
            vals = 0.5 * (vals[: n // 2] + vals[n // 2:])
        return float(vals.sum()), float(np.dot(vals, vals)), vals.size, hits

    if cfg.threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]

    total = sq = 0.0
    units = hits = 0
    for s, q, n, z in parts:
        total += s
        sq += q
        units += n
        hits += z
    mean = total / units
    var = max(sq / units - mean * mean, 0.0) * units / (units - 1) if units > 1 else 0.0
    vol = cfg.volume()
    if hits == 0:
        warnings.warn("no sample hit the support of the integrand; the estimate is 0", RuntimeWarning, stacklevel=2)
    n_drawn = sum(sizes)
    return Estimate(vol * mean, vol * math.sqrt(var / units), n_drawn, hits)
