"""Per-image aggregation baseline: sum descriptors over depth, threshold at the mean.

Unlike the set-level transform this never looks across images, so it cannot
tell the shared object from any locally salient region.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .descriptors import DescriptorGrid
from .errors import ValidationError


@dataclass(frozen=True, eq=False)
class AggregationMap:
    """Depth-summed activations for one grid with its mean threshold."""

    image_id: str
    values: np.ndarray
    threshold: float
    img_h: int
    img_w: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValidationError(f"aggregation values must be 2-d, got shape {values.shape}")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def h(self) -> int:
        return self.values.shape[0]

    @property
    def w(self) -> int:
        return self.values.shape[1]


def aggregation_map(grid: DescriptorGrid) -> AggregationMap:
    """Sum each cell's descriptor over channels; threshold is the map mean."""
    values = grid.data.sum(axis=2, dtype=np.float64)
    return AggregationMap(
        image_id=grid.image_id,
        values=values,
        threshold=float(values.mean()),
        img_h=grid.img_h,
        img_w=grid.img_w,
    )


def scda_mask(amap: AggregationMap) -> np.ndarray:
    """Boolean mask of cells strictly above the image's own mean activation."""
    return amap.values > amap.threshold
