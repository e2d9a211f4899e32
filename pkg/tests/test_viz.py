"""Overlay rendering: canvas sizing, box outlines, diverging heatmaps."""

import numpy as np
import pytest
from PIL import Image

from ddtloc import BoundingBox, ValidationError, viz


def test_blank_canvas_dimensions():
    canvas = viz.blank_canvas(10, 20)
    assert canvas.size == (20, 10)  # PIL size is (w, h)
    assert canvas.getpixel((0, 0)) == (228, 228, 228)


def test_find_image_file(tmp_path):
    (tmp_path / "a.png").write_bytes(b"")
    (tmp_path / "b.jpeg").write_bytes(b"")
    assert viz.find_image_file(tmp_path, "a").name == "a.png"
    assert viz.find_image_file(tmp_path, "b").name == "b.jpeg"
    assert viz.find_image_file(tmp_path, "c") is None


def test_draw_box_outlines_without_mutating_input():
    base = viz.blank_canvas(12, 12)
    before = np.asarray(base).copy()
    out = viz.draw_box(base, BoundingBox(xmin=2, ymin=3, xmax=9, ymax=8), width=1)
    np.testing.assert_array_equal(np.asarray(base), before)
    assert out.getpixel((2, 3)) == (255, 48, 48)
    assert out.getpixel((9, 8)) == (255, 48, 48)
    assert out.getpixel((0, 0)) == (228, 228, 228)
    assert out.getpixel((5, 5)) == (228, 228, 228)  # interior untouched


def test_draw_box_none_labels_no_detection():
    out = viz.draw_box(viz.blank_canvas(24, 80), None)
    # the anti-aliased text stamp leaves clearly reddish pixels up top
    region = np.asarray(out)[0:16, 0:70].astype(int)
    reddish = (region[..., 0] - region[..., 1]) > 80
    assert reddish.any()


def test_heatmap_red_positive_blue_negative():
    base = viz.blank_canvas(2, 2)
    out = viz.heatmap_overlay(base, np.array([[1.0, -1.0]]), alpha=1.0)
    r_pos, g_pos, b_pos = out.getpixel((0, 0))
    r_neg, g_neg, b_neg = out.getpixel((1, 0))
    assert r_pos == 255 and b_pos == 0 and g_pos == 0
    assert b_neg == 255 and r_neg == 0 and g_neg == 0


def test_heatmap_zero_map_keeps_base_with_full_alpha():
    base = viz.blank_canvas(3, 3)
    out = viz.heatmap_overlay(base, np.zeros((3, 3)), alpha=1.0)
    assert out.getpixel((1, 1)) == (255, 255, 255)  # zero map renders white


def test_heatmap_partial_alpha_blends():
    base = Image.new("RGB", (2, 2), (0, 0, 0))
    out = viz.heatmap_overlay(base, np.array([[1.0]]), alpha=0.5)
    assert out.getpixel((0, 0)) == (128, 0, 0)  # round(0.5 * 255)


def test_heatmap_upscales_cell_map():
    base = viz.blank_canvas(4, 4)
    values = np.array([[1.0, -1.0], [-1.0, 1.0]])
    out = viz.heatmap_overlay(base, values, alpha=1.0)
    arr = np.asarray(out)
    # each cell expands to a 2x2 pixel block
    assert (arr[0:2, 0:2] == (255, 0, 0)).all()
    assert (arr[0:2, 2:4] == (0, 0, 255)).all()


def test_heatmap_rejects_bad_alpha():
    base = viz.blank_canvas(2, 2)
    with pytest.raises(ValidationError):
        viz.heatmap_overlay(base, np.ones((1, 1)), alpha=0.0)
    with pytest.raises(ValidationError):
        viz.heatmap_overlay(base, np.ones((1, 1)), alpha=1.5)
