"""Numpy implementation of the integrand kernel.

Accumulation order matches the compiled kernel term by term, so indicator
integrands agree bit for bit between the two backends.
"""

import numpy as np

ANNULUS = 0
BALL = 1
DYADIC = 2


def eval_product(X, V, kinds, params, k):
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    N, m = V.shape
    out = np.ones(n)
    for j in range(N):
        y = np.zeros((n, k))
        for i in range(m):
            y += V[j, i] * X[:, i * k:(i + 1) * k]
        kind = kinds[j]
        if kind == BALL:
            r2 = np.zeros(n)
            for c in range(k):
                d = y[:, c] - params[j, 1 + c]
                r2 += d * d
            out[r2 > params[j, 0] * params[j, 0]] = 0.0
            continue
        r2 = np.zeros(n)
        for c in range(k):
            r2 += y[:, c] * y[:, c]
        if kind == ANNULUS:
            lo = params[j, 0] * params[j, 0]
            hi = params[j, 1] * params[j, 1]
            out[(r2 < lo) | (r2 > hi)] = 0.0
        else:
            t = np.sqrt(r2)
            _, e = np.frexp(t)
            ell = (e - 1).astype(np.float64)
            ok = (t != 0.0) & (ell >= 1) & (ell <= params[j, 2])
            vals = np.zeros(n)
            vals[ok] = np.power(ell[ok], -params[j, 1]) * np.power(2.0, -ell[ok] * params[j, 0])
            out *= vals
    return out
