"""Shared helpers for building small grids and sets in tests."""

import numpy as np
import pytest

from ddtloc import DescriptorGrid, DescriptorSet


def make_grid(data, image_id="img", scale=1):
    """Grid from an (h, w, d) array with image dims scaled from the grid."""
    data = np.asarray(data, dtype=np.float32)
    return DescriptorGrid(
        image_id=image_id,
        data=data,
        img_h=data.shape[0] * scale,
        img_w=data.shape[1] * scale,
    )


def make_set(*arrays, scale=1):
    grids = tuple(
        make_grid(a, image_id=f"img_{i}", scale=scale) for i, a in enumerate(arrays)
    )
    return DescriptorSet(grids=grids)


def random_set(rng, n_images=None, d=None, max_side=6):
    """Random small descriptor set with shared d and varied grid shapes."""
    if n_images is None:
        n_images = int(rng.integers(1, 6))
    if d is None:
        d = int(rng.integers(1, 17))
    arrays = []
    for _ in range(n_images):
        h = int(rng.integers(1, max_side + 1))
        w = int(rng.integers(1, max_side + 1))
        arrays.append(rng.standard_normal((h, w, d)))
    return make_set(*arrays)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
