"""Descriptor transforming: fit shared directions, project grids to indicator maps.

Fitting runs PCA over every descriptor of the set: the mean and covariance
come from linalg.compute_statistics, the leading directions from deflated
power iteration.  Each direction is then oriented so that positive indicator
values mark the minority of cells (the common object is assumed smaller than
the background across the set); ties keep the positive orientation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .descriptors import DescriptorGrid, DescriptorSet
from .errors import DimensionMismatchError, ValidationError
from .linalg import EigenPair, SetStatistics, compute_statistics, top_eigenpairs
from .parallel import ordered_map


@dataclass(frozen=True, eq=False)
class IndicatorMap:
    """Oriented projection values for one grid, one component: shape (h, w)."""

    image_id: str
    component: int
    values: np.ndarray
    img_h: int
    img_w: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValidationError(f"indicator values must be 2-d, got shape {values.shape}")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def h(self) -> int:
        return self.values.shape[0]

    @property
    def w(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class DdtModel:
    """Fitted transform: set statistics, leading eigenpairs, orientation flips."""

    stats: SetStatistics
    components: tuple[EigenPair, ...]
    sign_flips: tuple[int, ...]

    def __post_init__(self):
        if len(self.components) != len(self.sign_flips):
            raise ValidationError("one sign flip is required per component")
        if not self.components:
            raise ValidationError("model needs at least one component")
        for flip in self.sign_flips:
            if flip not in (-1, 1):
                raise ValidationError(f"sign flips must be +1 or -1, got {flip}")

    @property
    def d(self) -> int:
        return self.stats.d

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return tuple(p.value for p in self.components)


def component_projection(grid: DescriptorGrid, mean, vector, flip: int = 1) -> np.ndarray:
    """Oriented centered projections of one grid onto one direction: (h, w) float64."""
    values = kernels.project(grid.rows, np.asarray(mean, dtype=np.float64), np.asarray(vector, dtype=np.float64))
    values = values.reshape(grid.h, grid.w)
    return values if flip == 1 else -values


def orient_sign(stats: SetStatistics, vector: np.ndarray, dset: DescriptorSet, threads: int = 0) -> int:
    """-1 when strictly positive projections outnumber strictly negative ones, else +1.

    Counting is integer arithmetic, so the result is independent of thread
    count and grid order.
    """
    def count_signs(grid):
        values = kernels.project(grid.rows, stats.mean, vector)
        return int(np.count_nonzero(values > 0.0)), int(np.count_nonzero(values < 0.0))

    counts = ordered_map(count_signs, list(dset), threads)
    positive = sum(c[0] for c in counts)
    negative = sum(c[1] for c in counts)
    return -1 if positive > negative else 1


def fit(
    dset: DescriptorSet,
    k: int = 1,
    threads: int = 0,
    allow_degenerate: bool = False,
) -> DdtModel:
    """Fit a k-component transform over every descriptor in the set."""
    stats = compute_statistics(dset, threads=threads)
    components = top_eigenpairs(stats.cov, k, allow_degenerate=allow_degenerate)
    flips = tuple(
        orient_sign(stats, pair.vector, dset, threads=threads) for pair in components
    )
    return DdtModel(stats=stats, components=components, sign_flips=flips)


def indicator_map(model: DdtModel, grid: DescriptorGrid, component: int = 1) -> IndicatorMap:
    """Oriented indicator values of ``grid`` for the given 1-based component."""
    if grid.d != model.d:
        raise DimensionMismatchError(
            f"grid {grid.image_id!r} has d={grid.d}, model expects d={model.d}"
        )
    if not 1 <= component <= model.k:
        raise ValidationError(
            f"component must be in [1, {model.k}], got {component}"
        )
    pair = model.components[component - 1]
    flip = model.sign_flips[component - 1]
    values = component_projection(grid, model.stats.mean, pair.vector, flip)
    return IndicatorMap(
        image_id=grid.image_id,
        component=component,
        values=values,
        img_h=grid.img_h,
        img_w=grid.img_w,
    )


def noise_score(imap: IndicatorMap) -> int:
    """Count of strictly positive first-component indicator cells."""
    if imap.component != 1:
        raise ValidationError("noise scores are defined on the first component only")
    return int(np.count_nonzero(imap.values > 0.0))
