"""Kernel backends: the compiled and pure-Python paths must agree."""

import numpy as np
import pytest

from ddtloc import backend
from ddtloc import _kernels_py as py_kernels

cython_kernels = pytest.importorskip(
    "ddtloc._kernels", reason="compiled kernels not built"
)


def test_backend_name_is_valid():
    assert backend.BACKEND_NAME in ("cython", "python")
    assert "python" in backend.available_backends()


@pytest.mark.parametrize("rows,d", [(1, 1), (7, 3), (128, 64), (513, 16)])
def test_sum_rows_matches(rng, rows, d):
    x = rng.standard_normal((rows, d)).astype(np.float32)
    got = cython_kernels.sum_rows(x)
    want = py_kernels.sum_rows(x)
    assert got.dtype == want.dtype == np.float64
    np.testing.assert_allclose(got, want, rtol=1e-15, atol=1e-12)


@pytest.mark.parametrize("rows,d", [(1, 1), (7, 3), (300, 32), (1024, 8)])
def test_centered_ssq_matches(rng, rows, d):
    x = rng.standard_normal((rows, d)).astype(np.float32)
    mean = rng.standard_normal(d)
    got = cython_kernels.centered_ssq(x, mean)
    want = py_kernels.centered_ssq(x, mean)
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-10)
    np.testing.assert_allclose(got, got.T, atol=0)  # exact symmetry


def test_centered_ssq_crosses_block_boundary(rng):
    # the compiled kernel processes 256-row blocks; straddle the boundary
    x = rng.standard_normal((256 * 2 + 17, 5)).astype(np.float32)
    mean = rng.standard_normal(5)
    np.testing.assert_allclose(
        cython_kernels.centered_ssq(x, mean),
        py_kernels.centered_ssq(x, mean),
        rtol=1e-12,
        atol=1e-10,
    )


@pytest.mark.parametrize("rows,d", [(1, 1), (9, 4), (640, 32)])
def test_project_matches(rng, rows, d):
    x = rng.standard_normal((rows, d)).astype(np.float32)
    mean = rng.standard_normal(d)
    w = rng.standard_normal(d)
    got = cython_kernels.project(x, mean, w)
    want = py_kernels.project(x, mean, w)
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)


def test_forcing_python_backend(monkeypatch):
    monkeypatch.setenv("DDTLOC_BACKEND", "python")
    import importlib

    module = importlib.reload(backend)
    try:
        assert module.BACKEND_NAME == "python"
        assert module.kernels is py_kernels
    finally:
        monkeypatch.undo()
        importlib.reload(backend)


def test_unknown_backend_rejected(monkeypatch):
    monkeypatch.setenv("DDTLOC_BACKEND", "fortran")
    import importlib

    with pytest.raises(ImportError):
        importlib.reload(backend)
    monkeypatch.undo()
    importlib.reload(backend)
