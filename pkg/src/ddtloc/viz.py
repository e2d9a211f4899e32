"""Rendering: predicted-box overlays and diverging indicator heatmaps."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from .errors import ValidationError
from .geometry import BoundingBox
from .localize import resize_nearest

_IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp")
_BOX_COLOR = (255, 48, 48)


def find_image_file(images_dir, image_id: str) -> Path | None:
    """Locate the source image by id under common extensions."""
    for ext in _IMAGE_EXTENSIONS:
        candidate = Path(images_dir) / f"{image_id}{ext}"
        if candidate.is_file():
            return candidate
    return None


def blank_canvas(img_h: int, img_w: int) -> Image.Image:
    """Neutral background used when no source image is available."""
    return Image.new("RGB", (img_w, img_h), (228, 228, 228))


def draw_box(image: Image.Image, box: BoundingBox | None, width: int = 3) -> Image.Image:
    """Copy of ``image`` with the box outline, or a 'no detection' label for None."""
    out = image.convert("RGB").copy()
    drawer = ImageDraw.Draw(out)
    if box is not None:
        drawer.rectangle(
            [box.xmin, box.ymin, box.xmax, box.ymax], outline=_BOX_COLOR, width=width
        )
    else:
        drawer.text((4, 4), "no detection", fill=_BOX_COLOR)
    return out


def heatmap_overlay(image: Image.Image, values: np.ndarray, alpha: float = 0.45) -> Image.Image:
    """Blend a diverging red/blue rendering of a cell map over the image.

    Positive cells shade toward red, negative toward blue, scaled by the
    map's own maximum magnitude.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValidationError(f"alpha must be in (0, 1], got {alpha}")
    base = image.convert("RGB")
    img_w, img_h = base.size
    resized = resize_nearest(np.asarray(values, dtype=np.float64), img_h, img_w)
    vmax = float(np.abs(resized).max())
    norm = resized / vmax if vmax > 0 else np.zeros_like(resized)
    pos = np.clip(norm, 0.0, 1.0)
    neg = np.clip(-norm, 0.0, 1.0)
    color = np.empty((img_h, img_w, 3), dtype=np.float64)
    color[..., 0] = 255.0 * (1.0 - neg)
    color[..., 1] = 255.0 * (1.0 - np.maximum(pos, neg))
    color[..., 2] = 255.0 * (1.0 - pos)
    blended = (1.0 - alpha) * np.asarray(base, dtype=np.float64) + alpha * color
    return Image.fromarray(np.clip(blended + 0.5, 0, 255).astype(np.uint8), "RGB")
