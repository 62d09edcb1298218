import importlib
import os
import subprocess
import sys

import numpy as np
import pytest

from g3pd import _accel

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


@needs_numba
def test_shrink_paths_agree(rng):
    x = rng.standard_normal((37, 53)) * 3
    for alpha in (0.0, 0.5, 10.0):
        np.testing.assert_array_equal(_accel.shrink_numba(x, alpha), _accel.shrink_numpy(x, alpha))


@needs_numba
@pytest.mark.parametrize("shape,s", [((50, 61), 9), ((9, 9), 9), ((100, 100), 7)])
def test_block_count_paths_agree(shape, s, rng):
    b = (rng.random(shape) > 0.6).astype(np.uint8)
    np.testing.assert_array_equal(_accel.block_counts_numba(b, s), _accel.block_counts_numpy(b, s))


@needs_numba
def test_neighbor_count_paths_agree(rng):
    b = (rng.random((17, 23)) > 0.5).astype(np.uint8)
    np.testing.assert_array_equal(_accel.neighbor_counts_numba(b), _accel.neighbor_counts_numpy(b))


def test_neighbor_counts_small_case():
    b = np.zeros((3, 3), np.uint8)
    b[1, 1] = 1
    expect = np.ones((3, 3), np.int64)
    expect[1, 1] = 0
    np.testing.assert_array_equal(_accel.neighbor_counts_numpy(b), expect)


def test_env_flag_selects_numpy_path():
    code = "from g3pd import _accel; print(_accel.USE_NUMBA, _accel.shrink_kernel.__name__)"
    env = dict(os.environ, G3PD_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "shrink_numpy"]
