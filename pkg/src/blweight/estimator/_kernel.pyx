# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integrand kernel: product of radial test functions at sample points."""

import numpy as np
cimport numpy as cnp
from libc.math cimport frexp, pow, sqrt

cnp.import_array()

cdef enum:
    ANNULUS = 0
    BALL = 1
    DYADIC = 2


def eval_product(const double[:, ::1] X, const double[:, ::1] V, const int[::1] kinds,
                 const double[:, ::1] params, int k):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t N = V.shape[0]
    cdef Py_ssize_t m = V.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double[::1] y = np.empty(k, dtype=np.float64)
    cdef Py_ssize_t s, j, i, c
    cdef double val, r2, d, lo, hi, t, ell
    cdef int e, kind
    with nogil:
        for s in range(n):
            val = 1.0
            for j in range(N):
                for c in range(k):
                    y[c] = 0.0
                for i in range(m):
                    for c in range(k):
                        y[c] += V[j, i] * X[s, i * k + c]
                kind = kinds[j]
                if kind == ANNULUS:
                    r2 = 0.0
                    for c in range(k):
                        r2 += y[c] * y[c]
                    lo = params[j, 0] * params[j, 0]
                    hi = params[j, 1] * params[j, 1]
                    if r2 < lo or r2 > hi:
                        val = 0.0
                elif kind == BALL:
                    r2 = 0.0
                    for c in range(k):
                        d = y[c] - params[j, 1 + c]
                        r2 += d * d
                    if r2 > params[j, 0] * params[j, 0]:
                        val = 0.0
                else:
                    r2 = 0.0
                    for c in range(k):
                        r2 += y[c] * y[c]
                    t = sqrt(r2)
                    frexp(t, &e)
                    ell = e - 1
                    if t == 0.0 or ell < 1 or ell > params[j, 2]:
                        val = 0.0
                    else:
                        val *= pow(ell, -params[j, 1]) * pow(2.0, -ell * params[j, 0])
                if val == 0.0:
                    break
            out[s] = val
    return out_arr
