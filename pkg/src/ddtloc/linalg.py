"""Set statistics (mean, covariance) and the leading eigenpair solver.

The covariance uses the population divisor (total descriptor count K) and is
accumulated in two passes: mean first, then centered second moments.  Per-grid
partials are combined with a fixed reduction tree in manifest order, so the
result is bit-identical for every thread count.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .descriptors import DescriptorSet
from .errors import DegenerateSpectrumError, ValidationError
from .parallel import ordered_map, tree_reduce

ALIGNMENT_TOL = 1e-12
RESIDUAL_REL_TOL = 1e-8
GAP_REL_TOL = 1e-9
MAX_ITERATIONS = 10000
SIGN_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SetStatistics:
    """Mean and covariance of every descriptor in a set, with the count K."""

    mean: np.ndarray
    cov: np.ndarray
    count: int

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        cov = np.asarray(self.cov, dtype=np.float64)
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise ValidationError(
                f"statistics shapes inconsistent: mean {mean.shape}, cov {cov.shape}"
            )
        if self.count <= 0:
            raise ValidationError(f"descriptor count must be positive, got {self.count}")
        mean = mean.copy()
        cov = cov.copy()
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def d(self) -> int:
        return self.mean.size


@dataclass(frozen=True, eq=False)
class EigenPair:
    """One eigenvalue with its unit eigenvector in canonical sign."""

    value: float
    vector: np.ndarray
    iterations: int
    residual: float

    def __post_init__(self):
        vector = np.asarray(self.vector, dtype=np.float64).copy()
        vector.flags.writeable = False
        object.__setattr__(self, "vector", vector)


def compute_statistics(dset: DescriptorSet, threads: int = 0) -> SetStatistics:
    """Mean and population covariance over all descriptors of all grids."""
    grids = list(dset)
    count = dset.total_descriptors
    sums = ordered_map(lambda g: kernels.sum_rows(g.rows), grids, threads)
    mean = tree_reduce(np.add, sums) / count
    ssqs = ordered_map(lambda g: kernels.centered_ssq(g.rows, mean), grids, threads)
    cov = tree_reduce(np.add, ssqs) / count
    cov = (cov + cov.T) / 2.0
    return SetStatistics(mean=mean, cov=cov, count=count)


def _canonical_sign(vector: np.ndarray) -> np.ndarray:
    """Flip so the first component larger than SIGN_TOL in magnitude is positive."""
    idx = np.flatnonzero(np.abs(vector) > SIGN_TOL)
    if idx.size and vector[idx[0]] < 0:
        return -vector
    return vector


def _power_iteration(matrix, start, prev_vectors, scale_ref, trace_ref, max_iterations):
    """One deflation step: dominant eigenpair of ``matrix`` from ``start``.

    Every iterate is re-orthogonalized against ``prev_vectors`` (the pairs
    found so far) so rounding in the deflated matrix cannot reintroduce
    converged directions; this keeps the returned vectors pairwise
    orthogonal to machine precision.  Stops when successive iterates align
    within ALIGNMENT_TOL and the residual ||Av - lambda v|| is within
    1e-8 * max(scale_ref, trace * 1e-12), where scale_ref is the leading
    eigenvalue known so far (the running Rayleigh quotient for the first
    pair).  Returns (pair, converged, gap_estimate); the gap estimate comes
    from the observed convergence ratio and is meaningful when convergence
    stalled.
    """
    matrix_scale = float(np.abs(matrix).max())

    def orthogonalize(vec):
        for q in prev_vectors:
            vec -= (q @ vec) * q
        return vec

    v = orthogonalize(start.copy())
    norm_v = float(np.linalg.norm(v))
    if norm_v <= 1e-12:
        # start lies in the span of the converged pairs: restart from the
        # largest-diagonal axis, orthogonalized the same way.
        v = np.zeros(matrix.shape[0])
        v[int(np.argmax(np.diag(matrix)))] = 1.0
        v = orthogonalize(v)
        norm_v = float(np.linalg.norm(v))
        if norm_v == 0.0:
            pair = EigenPair(value=0.0, vector=_canonical_sign(start), iterations=1, residual=0.0)
            return pair, True, None
    v /= norm_v
    av = orthogonalize(matrix @ v)
    rayleigh = float(v @ av)
    residual = 0.0
    previous_alignment_gap = None
    gap_estimate = None
    perturbs = 0
    # Matvec norms at rounding-dust level (relative to the matrix magnitude)
    # mean v sits in a numerically invariant null space; exact zeros alone
    # would miss that, since deflation leaves O(eps) residue along v.
    null_floor = matrix_scale * 1e-13
    for iteration in range(1, max_iterations + 1):
        norm_av = float(np.linalg.norm(av))
        if norm_av <= null_floor:
            if matrix_scale == 0.0:
                # whole matrix is zero: v is an exact eigenvector for 0.
                pair = EigenPair(
                    value=0.0, vector=_canonical_sign(v), iterations=iteration, residual=0.0
                )
                return pair, True, None
            # v fell in the null space of a nonzero matrix: perturb and go on.
            # Component 0 first; then the largest-diagonal axis, whose
            # Rayleigh quotient is positive so the next product cannot vanish.
            if perturbs == 0:
                bump = 0
            elif perturbs == 1:
                bump = int(np.argmax(np.diag(matrix)))
            else:
                pair = EigenPair(
                    value=0.0, vector=_canonical_sign(v), iterations=iteration, residual=0.0
                )
                return pair, True, None
            perturbs += 1
            v = v.copy()
            v[bump] += 1.0
            v = orthogonalize(v)
            norm_v = float(np.linalg.norm(v))
            if norm_v == 0.0:
                continue
            v /= norm_v
            av = orthogonalize(matrix @ v)
            continue
        v_next = av / norm_av
        alignment_gap = max(1.0 - abs(float(v @ v_next)), 0.0)
        av_full = matrix @ v_next
        av_next = orthogonalize(av_full.copy())
        rayleigh = float(v_next @ av_full)
        # Reported residual: unprojected deflated action, the quantity
        # callers can reconstruct from the returned pairs.  It floors at the
        # previous pairs' residuals, which the solve cannot reduce, so the
        # stop rule drives the projected residual (which decays to rounding
        # dust) two orders tighter; the accumulated contamination then stays
        # far inside the advertised bound.
        residual = float(np.linalg.norm(av_full - rayleigh * v_next))
        residual_proj = float(np.linalg.norm(av_next - rayleigh * v_next))
        reference = max(
            scale_ref if scale_ref is not None else abs(rayleigh), trace_ref * 1e-12, 0.0
        )
        limit = RESIDUAL_REL_TOL * reference
        if alignment_gap < ALIGNMENT_TOL and residual <= limit and residual_proj <= 0.01 * limit:
            pair = EigenPair(
                value=rayleigh,
                vector=_canonical_sign(v_next),
                iterations=iteration,
                residual=residual,
            )
            return pair, True, None
        if previous_alignment_gap is not None and previous_alignment_gap > 0:
            # alignment gap shrinks by the squared eigenvalue ratio per step
            ratio = math.sqrt(min(alignment_gap / previous_alignment_gap, 1.0))
            gap_estimate = 1.0 - ratio
        previous_alignment_gap = alignment_gap
        v, av = v_next, av_next
    pair = EigenPair(
        value=rayleigh, vector=_canonical_sign(v), iterations=max_iterations, residual=residual
    )
    return pair, False, gap_estimate


def top_eigenpairs(
    cov,
    k: int,
    *,
    allow_degenerate: bool = False,
    max_iterations: int = MAX_ITERATIONS,
) -> tuple[EigenPair, ...]:
    """The k leading eigenpairs of a symmetric PSD matrix by deflated power iteration.

    One extra eigenvalue beyond k is estimated so every requested pair has a
    measurable spectral gap.  A relative gap at or below GAP_REL_TOL raises
    DegenerateSpectrumError (downgraded to a warning with allow_degenerate).
    """
    matrix = np.asarray(cov, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(f"covariance must be square, got shape {matrix.shape}")
    if not np.isfinite(matrix).all():
        raise ValidationError("covariance contains non-finite values")
    d = matrix.shape[0]
    scale = float(np.abs(matrix).max())
    if scale > 0 and float(np.abs(matrix - matrix.T).max()) > 1e-9 * scale:
        raise ValidationError("covariance is not symmetric")
    if not 1 <= k <= d:
        raise ValidationError(f"k must be in [1, {d}], got {k}")

    matrix = (matrix + matrix.T) / 2.0
    n_solve = min(k + 1, d)
    # Ordering violations mean the start vector was deficient for some pair
    # (for example orthogonal to a dominant eigenvector); retry once from a
    # perturbed start before giving up.
    starts = [np.full(d, 1.0 / math.sqrt(d))]
    perturbed = np.full(d, 1.0)
    perturbed[0] += 1.0
    starts.append(perturbed / np.linalg.norm(perturbed))

    trace_ref = abs(float(np.trace(matrix)))
    pairs: list[EigenPair] = []
    for attempt, start in enumerate(starts):
        pairs = []
        deflated = matrix.copy()
        ordered = True
        for i in range(n_solve):
            is_aux = i == k
            scale_ref = pairs[0].value if pairs else None
            pair, converged, gap_estimate = _power_iteration(
                deflated, start, [p.vector for p in pairs], scale_ref, trace_ref, max_iterations
            )
            if not converged and not is_aux:
                message = (
                    f"power iteration for pair {i + 1} did not converge within "
                    f"{max_iterations} iterations; the spectral gap is too small "
                    f"(estimated relative gap {gap_estimate:.3e})"
                    if gap_estimate is not None
                    else f"power iteration for pair {i + 1} did not converge within "
                    f"{max_iterations} iterations"
                )
                if allow_degenerate:
                    warnings.warn(message, RuntimeWarning, stacklevel=2)
                else:
                    raise DegenerateSpectrumError(message, gap=gap_estimate)
            if pairs:
                tol = 1e-6 * max(abs(pairs[0].value), 1e-300)
                if pair.value - pairs[-1].value > tol:
                    ordered = False
                    break
            pairs.append(pair)
            deflated -= pair.value * np.outer(pair.vector, pair.vector)
        if ordered:
            break
    else:
        raise DegenerateSpectrumError(
            "eigenvalues could not be resolved in dominance order even after "
            "a perturbed restart; spectrum is numerically unstable"
        )

    lam1 = pairs[0].value
    if lam1 <= 0.0:
        raise DegenerateSpectrumError(
            "covariance has a zero (or negative) leading eigenvalue: "
            "the descriptor set carries no variance to transform"
        )
    values = [p.value for p in pairs]
    if len(values) < k + 1:
        values.append(0.0)  # k == d: no further spectrum below the last pair
    for i in range(k):
        gap = (values[i] - values[i + 1]) / lam1
        if gap <= GAP_REL_TOL:
            message = (
                f"eigenvalues {i + 1} and {i + 2} are degenerate "
                f"(relative gap {gap:.3e} <= {GAP_REL_TOL}): the direction is "
                f"not uniquely defined"
            )
            if allow_degenerate:
                warnings.warn(message, RuntimeWarning, stacklevel=2)
            else:
                raise DegenerateSpectrumError(message, gap=gap)
    return tuple(pairs[:k])
