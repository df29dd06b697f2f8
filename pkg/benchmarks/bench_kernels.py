"""Compare the compiled integrand kernel with the numpy fallback.

    python benchmarks/bench_kernels.py [--samples N] [--repeat R]

Reports the best-of-R wall time per backend on the triangle shell
integrand and on an m=3, k=2 mixed-kind integrand, and checks that the two
backends return identical indicator products.
"""

import argparse
import time

import numpy as np

from blweight.estimator import backend


def cases(n, rng):
    X = rng.uniform(-2, 2, size=(n, 2))
    V = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    kinds = np.zeros(3, dtype=np.int32)
    params = np.array([[0.8, 1.2], [0.8, 1.2], [1.5, 2.5]])
    yield "triangle shells (m=2, k=1)", X, V, kinds, params, 1

    X = rng.uniform(-2, 2, size=(n, 6))
    V = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0], [1.0, 1.0, 1.0], [1.0, -1.0, 2.0]])
    kinds = np.array([0, 0, 1, 2, 0], dtype=np.int32)
    params = np.array([[0.5, 2.0, 0], [0.5, 2.0, 0], [1.5, 0.3, -0.2], [0.7, 1.05, 12], [0.2, 3.0, 0]])
    yield "mixed kinds (m=3, k=2)", X, V, kinds, params, 2


def best(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    if backend.compiled_eval_product is None:
        print("compiled kernel not built; only the numpy fallback is available")
    print(f"{'case':30s} {'numpy [s]':>10s} {'compiled [s]':>13s} {'speedup':>8s}  agree")
    for name, *inp in cases(args.samples, rng):
        tp, a = best(backend.python_eval_product, inp, args.repeat)
        if backend.compiled_eval_product is None:
            print(f"{name:30s} {tp:10.4f} {'-':>13s} {'-':>8s}  -")
            continue
        tc, b = best(backend.compiled_eval_product, inp, args.repeat)
        agree = "exact" if np.array_equal(a, b) else f"max rel {np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)):.1e}"
        print(f"{name:30s} {tp:10.4f} {tc:13.4f} {tp / tc:8.1f}x  {agree}")


if __name__ == "__main__":
    main()
