"""Pure-NumPy kernels, arithmetic-equivalent to the compiled extension."""

import numpy as np


def sum_rows(x):
    """Column sums of ``x`` accumulated in float64: shape (d,)."""
    return x.sum(axis=0, dtype=np.float64)


def centered_ssq(x, mean):
    """Sum of outer products (x_i - mean)(x_i - mean)^T: shape (d, d)."""
    if mean.shape[0] != x.shape[1]:
        raise ValueError("mean length does not match descriptor dim")
    xc = x.astype(np.float64)
    xc -= mean
    return xc.T @ xc


def project(x, mean, w):
    """Centered projections (x_i - mean) . w in float64: shape (n,)."""
    if mean.shape[0] != x.shape[1] or w.shape[0] != x.shape[1]:
        raise ValueError("mean/weight length does not match descriptor dim")
    return x.astype(np.float64) @ w - float(mean @ w)
