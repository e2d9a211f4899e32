"""Synthetic planted-signal benchmark sets.

Every image is a grid of non-negative background descriptors,
ReLU(noise * N(0, 1)) per channel.  Clean images add ``signal * u`` to the
cells of one planted rectangle, where ``u`` is a sparse non-negative unit
direction drawn once per seed.  Noisy images get no rectangle and an empty
annotation.  Two optional structures exercise the baselines:

* ``distractor``: each clean image also plants a second rectangle whose
  direction lives on channels disjoint from ``u``'s support and is redrawn
  per image, so only per-image methods respond to it.
* ``two_part``: the planted rectangle splits into two column bands driven
  by two disjoint directions, giving the set a second shared component.

Everything is reproducible from the seed alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .descriptors import Annotation, DescriptorGrid, DescriptorSet, write_descriptor_file
from .errors import ValidationError
from .geometry import BoundingBox

_ASPECT_MAX = 1.0 / 0.6  # height/width range sampled log-uniformly


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic set."""

    n_images: int = 20
    grid_h: int = 30
    grid_w: int = 30
    d: int = 64
    image_scale: int = 8
    signal: float = 5.0
    noise: float = 1.0
    cover_min: float = 0.1
    cover_max: float = 0.3
    n_noisy: int = 0
    seed: int = 0
    distractor: bool = False
    two_part: bool = False

    def __post_init__(self):
        if self.n_images < 1:
            raise ValidationError("n_images must be >= 1")
        if self.grid_h < 1 or self.grid_w < 1:
            raise ValidationError("grid dimensions must be >= 1")
        if self.d < 1:
            raise ValidationError("d must be >= 1")
        if self.image_scale < 1:
            raise ValidationError("image_scale must be >= 1")
        if self.signal < 0 or self.noise < 0:
            raise ValidationError("signal and noise must be >= 0")
        if not 0 < self.cover_min <= self.cover_max <= 1:
            raise ValidationError("need 0 < cover_min <= cover_max <= 1")
        if not 0 <= self.n_noisy < self.n_images:
            raise ValidationError("n_noisy must be in [0, n_images)")
        support = _support_size(self.d)
        needed = support * (2 if self.two_part else 1) + (support if self.distractor else 0)
        if needed > self.d:
            raise ValidationError(
                f"d={self.d} too small for the requested direction structure"
            )

    @property
    def n_clean(self) -> int:
        return self.n_images - self.n_noisy


@dataclass(frozen=True)
class SynthResult:
    """Generated set plus ground truth and cell-level placement metadata."""

    spec: SynthSpec
    dset: DescriptorSet
    annotations: dict[str, Annotation]
    labels: dict[str, str]
    meta: dict


def _support_size(d: int) -> int:
    return max(1, d // 8)


def _unit_direction(rng: np.random.Generator, d: int, support: np.ndarray) -> np.ndarray:
    """Non-negative unit vector living on the given channels."""
    values = np.abs(rng.standard_normal(support.size))
    norm = float(np.linalg.norm(values))
    while norm == 0.0:
        values = np.abs(rng.standard_normal(support.size))
        norm = float(np.linalg.norm(values))
    direction = np.zeros(d)
    direction[support] = values / norm
    return direction


def _sample_rect(rng, grid_h, grid_w, cover_min, cover_max, min_w=1):
    """Cell rectangle (r0, c0, rect_h, rect_w) covering a fraction in the band."""
    n_cells = grid_h * grid_w
    for _ in range(1000):
        frac = rng.uniform(cover_min, cover_max)
        aspect = math.exp(rng.uniform(math.log(0.6), math.log(_ASPECT_MAX)))
        rect_h = int(round(math.sqrt(frac * n_cells * aspect)))
        rect_w = int(round(math.sqrt(frac * n_cells / aspect)))
        rect_h = min(max(rect_h, 1), grid_h)
        rect_w = min(max(rect_w, min_w), grid_w)
        if not cover_min <= rect_h * rect_w / n_cells <= cover_max:
            continue
        r0 = int(rng.integers(0, grid_h - rect_h + 1))
        c0 = int(rng.integers(0, grid_w - rect_w + 1))
        return r0, c0, rect_h, rect_w
    raise ValidationError(
        f"could not sample a rectangle covering [{cover_min}, {cover_max}] "
        f"of a {grid_h}x{grid_w} grid"
    )


def _rects_overlap(a, b):
    ar0, ac0, ah, aw = a
    br0, bc0, bh, bw = b
    return not (ar0 + ah <= br0 or br0 + bh <= ar0 or ac0 + aw <= bc0 or bc0 + bw <= ac0)


def _cell_rect_to_box(r0, c0, rect_h, rect_w, scale) -> BoundingBox:
    return BoundingBox(
        xmin=c0 * scale,
        ymin=r0 * scale,
        xmax=(c0 + rect_w) * scale - 1,
        ymax=(r0 + rect_h) * scale - 1,
    )


def generate(spec: SynthSpec) -> SynthResult:
    """Build the descriptor set, annotations, and noise labels for ``spec``."""
    rng = np.random.default_rng(spec.seed)
    m = _support_size(spec.d)
    perm = rng.permutation(spec.d)
    support = np.sort(perm[:m])
    direction = _unit_direction(rng, spec.d, support)
    support2 = np.sort(perm[m : 2 * m]) if spec.two_part else None
    direction2 = _unit_direction(rng, spec.d, support2) if spec.two_part else None
    reserved = 2 * m if spec.two_part else m
    free_channels = np.sort(perm[reserved:])

    img_h = spec.grid_h * spec.image_scale
    img_w = spec.grid_w * spec.image_scale

    grids = []
    annotations = {}
    labels = {}
    planted_cells = {}
    distractor_cells = {}
    parts_cells = {}
    for index in range(spec.n_images):
        image_id = f"img_{index:04d}"
        is_noisy = index >= spec.n_clean
        data = spec.noise * rng.standard_normal((spec.grid_h, spec.grid_w, spec.d))
        np.maximum(data, 0.0, out=data)
        if not is_noisy:
            min_w = 3 if spec.two_part else 1
            rect = _sample_rect(
                rng, spec.grid_h, spec.grid_w, spec.cover_min, spec.cover_max, min_w
            )
            r0, c0, rect_h, rect_w = rect
            if spec.two_part:
                split = c0 + max(1, (2 * rect_w) // 3)
                data[r0 : r0 + rect_h, c0:split] += spec.signal * direction
                data[r0 : r0 + rect_h, split : c0 + rect_w] += spec.signal * direction2
                parts_cells[image_id] = [
                    [r0, c0, r0 + rect_h - 1, split - 1],
                    [r0, split, r0 + rect_h - 1, c0 + rect_w - 1],
                ]
            else:
                data[r0 : r0 + rect_h, c0 : c0 + rect_w] += spec.signal * direction
            planted_cells[image_id] = [r0, c0, r0 + rect_h - 1, c0 + rect_w - 1]
            boxes = (_cell_rect_to_box(r0, c0, rect_h, rect_w, spec.image_scale),)
            if spec.distractor:
                for _ in range(1000):
                    cand = _sample_rect(
                        rng, spec.grid_h, spec.grid_w, spec.cover_min, spec.cover_max
                    )
                    if not _rects_overlap(rect, cand):
                        break
                else:
                    raise ValidationError("could not place a disjoint distractor rectangle")
                d_support = np.sort(rng.choice(free_channels, m, replace=False))
                d_direction = _unit_direction(rng, spec.d, d_support)
                dr0, dc0, dh, dw = cand
                data[dr0 : dr0 + dh, dc0 : dc0 + dw] += spec.signal * d_direction
                distractor_cells[image_id] = [dr0, dc0, dr0 + dh - 1, dc0 + dw - 1]
        else:
            boxes = ()
        grids.append(
            DescriptorGrid(image_id=image_id, data=data, img_h=img_h, img_w=img_w)
        )
        annotations[image_id] = Annotation(image_id=image_id, boxes=boxes)
        labels[image_id] = "noisy" if is_noisy else "clean"

    meta = {
        "seed": spec.seed,
        "direction_support": [int(c) for c in support],
        "direction": direction.tolist(),
        "planted_cells": planted_cells,
    }
    if spec.two_part:
        meta["second_direction_support"] = [int(c) for c in support2]
        meta["second_direction"] = direction2.tolist()
        meta["parts_cells"] = parts_cells
    if spec.distractor:
        meta["distractor_cells"] = distractor_cells
    return SynthResult(
        spec=spec,
        dset=DescriptorSet(grids=tuple(grids)),
        annotations=annotations,
        labels=labels,
        meta=meta,
    )


def write_dataset(spec: SynthSpec, out_dir) -> SynthResult:
    """Generate and write descriptors, manifest, annotations, labels, and meta."""
    result = generate(spec)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest_lines = []
    for grid in result.dset:
        filename = f"{grid.image_id}.ddtd"
        write_descriptor_file(grid, out_dir / filename)
        manifest_lines.append(f"{grid.image_id}\t{filename}")
    (out_dir / "manifest.tsv").write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")
    annotations_json = {
        image_id: [box.as_list() for box in ann.boxes]
        for image_id, ann in result.annotations.items()
    }
    (out_dir / "annotations.json").write_text(
        json.dumps(annotations_json, indent=2) + "\n", encoding="utf-8"
    )
    (out_dir / "noise_labels.json").write_text(
        json.dumps(result.labels, indent=2) + "\n", encoding="utf-8"
    )
    (out_dir / "meta.json").write_text(
        json.dumps(result.meta, indent=2) + "\n", encoding="utf-8"
    )
    return result
