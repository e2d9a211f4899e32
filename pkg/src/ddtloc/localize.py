"""From cell maps to pixel boxes: resize, threshold, largest component, bounding box."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .descriptors import DescriptorGrid
from .errors import ValidationError
from .geometry import BoundingBox
from .scda import aggregation_map, scda_mask
from .transform import DdtModel, indicator_map

# 8-connectivity: diagonal neighbors join a component.
_STRUCTURE = np.ones((3, 3), dtype=bool)


def resize_nearest(values: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Nearest-neighbor upsample: output pixel (i, j) copies cell (i*h//out_h, j*w//out_w)."""
    values = np.asarray(values)
    if values.ndim != 2:
        raise ValidationError(f"resize expects a 2-d map, got shape {values.shape}")
    h, w = values.shape
    if out_h < h or out_w < w:
        raise ValidationError(
            f"resize target {out_h}x{out_w} smaller than source {h}x{w}"
        )
    rows = (np.arange(out_h) * h) // out_h
    cols = (np.arange(out_w) * w) // out_w
    return values[np.ix_(rows, cols)]


def positive_mask(values: np.ndarray, threshold: float = 0.0) -> np.ndarray:
    """Cells strictly above the threshold."""
    return np.asarray(values) > threshold


def largest_connected_component(mask: np.ndarray) -> np.ndarray | None:
    """Largest 8-connected true region, or None for an all-false mask.

    Size ties go to the component whose first pixel appears earliest in
    raster order.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        return None
    labels, n_labels = ndimage.label(mask, structure=_STRUCTURE)
    sizes = np.bincount(labels.ravel(), minlength=n_labels + 1)
    sizes[0] = 0
    best = np.flatnonzero(sizes == sizes.max())
    if best.size > 1:
        flat = labels.ravel()
        winner = flat[np.flatnonzero(np.isin(flat, best))[0]]
    else:
        winner = best[0]
    return labels == winner


def bounding_box(component: np.ndarray) -> BoundingBox:
    """Minimal inclusive box around the true pixels of a mask."""
    ys, xs = np.nonzero(np.asarray(component, dtype=bool))
    if ys.size == 0:
        raise ValidationError("cannot bound an empty component")
    return BoundingBox(
        xmin=int(xs.min()), ymin=int(ys.min()), xmax=int(xs.max()), ymax=int(ys.max())
    )


def localize_map(values: np.ndarray, img_h: int, img_w: int, threshold: float = 0.0) -> BoundingBox | None:
    """Pixel box from a cell-level map: resize, threshold, largest component, bound."""
    resized = resize_nearest(values, img_h, img_w)
    component = largest_connected_component(positive_mask(resized, threshold))
    if component is None:
        return None
    return bounding_box(component)


def localize_image(
    grid: DescriptorGrid,
    method: str = "ddt",
    model: DdtModel | None = None,
) -> BoundingBox | None:
    """Predicted pixel box for one image, or None when no cell is positive."""
    if method == "ddt":
        if model is None:
            raise ValidationError("ddt localization requires a fitted model")
        imap = indicator_map(model, grid, component=1)
        return localize_map(imap.values, grid.img_h, grid.img_w)
    if method == "scda":
        amap = aggregation_map(grid)
        mask = scda_mask(amap)
        resized = resize_nearest(mask, grid.img_h, grid.img_w)
        component = largest_connected_component(resized)
        if component is None:
            return None
        return bounding_box(component)
    raise ValidationError(f"unknown method {method!r}, expected 'ddt' or 'scda'")
