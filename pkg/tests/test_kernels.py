"""The compiled kernels and the numpy fallback must agree."""
import os
import subprocess
import sys

import numpy as np
import pytest

from weylherm import _fallback, kernels
from conftest import _kernels, random_field

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")


@needs_ext
@pytest.mark.parametrize("n,nx,periodic", [(1, 3, False), (2, 3, True), (9, 17, False),
                                           (21, 50, True), (40, 33, False)])
def test_backends_agree(rng, n, nx, periodic):
    R = random_field(rng, n, nx)
    E = rng.normal(size=nx)
    blocks = rng.normal(size=(nx, (n + 1) // 2, n // 2))
    w = rng.normal(size=nx)
    outs = []
    for mod in (_fallback, _kernels):
        out = np.empty_like(R)
        mod.advect(R, E, 0.37, periodic, out)
        mod.add_full_coupling(blocks, R, out, 0.3 - 1j)
        mod.add_band_coupling(w, R, out, -1j)
        outs.append(out)
    scale = np.abs(outs[0]).max()
    assert np.abs(outs[0] - outs[1]).max() <= 1e-14 * scale


def test_advect_single_mode(backend):
    R = np.zeros((3, 6), complex)
    R[0] = 1.0
    out = np.empty_like(R)
    backend.advect(R, np.zeros(6), 1.0, False, out)
    assert np.all(out[0] == 0) and np.all(out[2] == 0)
    # -i sqrt(1/2) D 1: boundary cells only
    assert out[1, 0] == pytest.approx(-1j * np.sqrt(0.5) * 0.5)
    assert out[1, -1] == pytest.approx(1j * np.sqrt(0.5) * 0.5)
    assert np.all(out[1, 1:-1] == 0)


def test_backend_selection_env():
    code = "import weylherm.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, WEYLHERM_PURE_PYTHON="1")
    got = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert got.stdout.strip() == "python"
    assert kernels.BACKEND in ("python", "cython")


@needs_ext
def test_extension_active_by_default():
    if os.environ.get("WEYLHERM_PURE_PYTHON"):
        pytest.skip("fallback forced by environment")
    assert kernels.BACKEND == "cython"
