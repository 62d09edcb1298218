import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g3pd.prox import compute_delta, compute_mu2, cst, estimate_sigma, gumbel_z, lower_median, shrink

finite = st.floats(-1e3, 1e3, allow_nan=False)


def brute_prox(x, alpha, step=1e-4):
    grid = np.arange(x - alpha - 1.0, x + alpha + 1.0, step)
    return grid[np.argmin(alpha * np.abs(grid) + 0.5 * (grid - x) ** 2)]


def test_shrink_matches_brute_force_minimizer():
    rng = np.random.default_rng(7)
    for _ in range(100):
        x, alpha = rng.uniform(-3, 3), rng.uniform(0, 2)
        assert abs(shrink(x, alpha) - brute_prox(x, alpha)) <= 2e-4


@given(finite, st.floats(0, 1e3))
def test_shrink_scalar_properties(x, alpha):
    y = shrink(x, alpha)
    assert abs(y) <= abs(x)
    assert y == 0.0 or math.copysign(1, y) == math.copysign(1, x)
    assert abs(x - y) <= alpha + 1e-9 * abs(x)


@given(st.lists(finite, min_size=1, max_size=50), st.floats(0, 10))
def test_shrink_array_agrees_with_scalar(values, alpha):
    arr = shrink(np.array(values), alpha)
    assert [float(a) for a in arr] == [shrink(v, alpha) for v in values]


def test_shrink_edge_cases():
    assert shrink(0.0, 1.0) == 0.0
    assert shrink(2.0, 0.0) == 2.0
    with pytest.raises(ValueError):
        shrink(1.0, -0.1)


def test_cst_zero_threshold_is_identity(rng):
    x = rng.standard_normal((64, 64))
    np.testing.assert_allclose(cst(x, 0.0, scales=4), x, atol=1e-12)


def test_cst_huge_threshold_kills_everything(rng):
    x = rng.standard_normal((64, 64))
    assert np.max(np.abs(cst(x, 1e9, scales=4))) == 0.0


def test_lower_median():
    assert lower_median([4, 1, 3, 2]) == 2
    assert lower_median([5, 1, 3]) == 3


def test_sigma_estimate_on_white_noise():
    x = 0.1 * np.random.default_rng(3).standard_normal((256, 256))
    assert estimate_sigma(x) == pytest.approx(0.1, rel=0.05)


def test_delta_matches_extended_precision():
    mpmath.mp.dps = 50
    n, alpha = mpmath.mpf(10) ** 6, mpmath.mpf("0.7")
    z = -mpmath.log(mpmath.log(1 / (1 - alpha)))
    root = mpmath.sqrt(2 * mpmath.log(n))
    exact = root + (2 * z - mpmath.log(mpmath.log(n)) - mpmath.log(mpmath.pi)) / (2 * root)
    got = compute_delta(1.0, 10**6, 0.7).delta
    assert abs(got - float(exact)) <= 1e-12
    assert got == pytest.approx(4.862556377862278, abs=1e-12)


@given(st.floats(0, 100), st.integers(100, 10**8))
def test_delta_linear_in_sigma(sigma, n):
    unit = compute_delta(1.0, n).delta
    assert compute_delta(sigma, n).delta == sigma * unit


def test_gumbel_z():
    assert gumbel_z(0.7) == pytest.approx(-math.log(math.log(1 / 0.3)))


def test_mu2_clamped_at_zero():
    assert compute_mu2(np.array([-1.0, -2.0]), 0.045, 5e-4, 1e-3) == 0.0
    assert compute_mu2(np.array([2.0]), 0.5, 1.0, 1.0) == pytest.approx(2.0)
