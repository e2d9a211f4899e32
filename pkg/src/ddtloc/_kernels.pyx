# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for the hot per-grid passes.

All accumulation is float64 regardless of storage dtype, matching the
NumPy fallback bit for bit where BLAS rounding allows.
"""

import numpy as np

from libc.stdlib cimport free, malloc
from scipy.linalg.cython_blas cimport dsyrk


def sum_rows(const float[:, ::1] x):
    """Column sums of ``x`` accumulated in float64: shape (d,)."""
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, j
    out = np.zeros(d, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            for j in range(d):
                o[j] += <double> x[i, j]
    return out


def centered_ssq(const float[:, ::1] x, const double[::1] mean):
    """Sum of outer products (x_i - mean)(x_i - mean)^T: shape (d, d).

    Centers and widens blocks of rows into a float64 buffer, then runs a
    rank-k symmetric update (dsyrk) per block.
    """
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1]
    cdef Py_ssize_t blk = 256, r, rows, i, j
    if mean.shape[0] != d:
        raise ValueError("mean length does not match descriptor dim")
    out = np.zeros((d, d), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef int dd = <int> d, nn
    cdef double alpha = 1.0, beta = 1.0
    cdef char uplo = b'L', trans = b'N'
    cdef double * buf = <double *> malloc(blk * d * sizeof(double))
    if buf == NULL:
        raise MemoryError("centered_ssq block buffer")
    try:
        with nogil:
            r = 0
            while r < n:
                rows = blk if n - r >= blk else n - r
                for i in range(rows):
                    for j in range(d):
                        buf[i * d + j] = <double> x[r + i, j] - mean[j]
                nn = <int> rows
                # Row-major (rows, d) is column-major (d, rows); 'L' in
                # column-major fills the row-major upper triangle.
                dsyrk(&uplo, &trans, &dd, &nn, &alpha, buf, &dd, &beta, &ov[0, 0], &dd)
                r += rows
            for i in range(d):
                for j in range(i + 1, d):
                    ov[j, i] = ov[i, j]
    finally:
        free(buf)
    return out


def project(const float[:, ::1] x, const double[::1] mean, const double[::1] w):
    """Centered projections (x_i - mean) . w in float64: shape (n,)."""
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, j
    if mean.shape[0] != d or w.shape[0] != d:
        raise ValueError("mean/weight length does not match descriptor dim")
    cdef double mw = 0.0, acc
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for j in range(d):
            mw += mean[j] * w[j]
        for i in range(n):
            acc = 0.0
            for j in range(d):
                acc += <double> x[i, j] * w[j]
            o[i] = acc - mw
    return out
