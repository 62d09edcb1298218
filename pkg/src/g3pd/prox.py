"""Soft thresholding, curvelet soft thresholding and the adaptive thresholds."""
import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .transforms.curvelet import get_frame
from .transforms.wavelet import dwt97_level1

MAD_TO_SIGMA = 0.6745


def shrink(x, alpha):
    """Soft thresholding ``sign(x) * max(|x| - alpha, 0)``, with ``shrink(0, a) = 0``.

    Works on scalars and on arrays of any shape.
    """
    if alpha < 0:
        raise ValueError(f"shrink threshold must be nonnegative, got {alpha}")
    if np.isscalar(x):
        mag = abs(x) - alpha
        return math.copysign(mag, x) if mag > 0 else 0.0
    x = np.asarray(x, dtype=np.float64)
    return _accel.shrink_kernel(x, alpha)


def cst(img, alpha, scales=5, angles_scale2=16, frame=None):
    """Curvelet soft thresholding: adjoint(shrink(forward(img), alpha))."""
    img = np.asarray(img, dtype=np.float64)
    if frame is None:
        frame = get_frame(img.shape, scales, angles_scale2)
    return frame.adjoint(shrink(frame.forward(img), alpha))


def lower_median(values):
    """Median that picks the lower middle element for even counts."""
    flat = np.sort(np.asarray(values, dtype=np.float64).ravel())
    if flat.size == 0:
        raise ValueError("median of an empty sample")
    return float(flat[(flat.size - 1) // 2])


def estimate_sigma(img):
    """Noise std from the finest diagonal CDF 9/7 band: median(|HH|) / 0.6745."""
    hh = dwt97_level1(img)[3]
    return lower_median(np.abs(hh)) / MAD_TO_SIGMA


@dataclass(frozen=True)
class NoiseEstimate:
    sigma: float
    delta: float
    alpha: float
    coeff_count: int
    z: float


def gumbel_z(alpha):
    return -math.log(math.log(1.0 / (1.0 - alpha)))


def compute_delta(sigma, coeff_count, alpha=0.7):
    """Sup-norm threshold for noise curvelet coefficients from the extreme-value quantile."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if coeff_count < 2:
        raise ValueError(f"coeff_count must be >= 2, got {coeff_count}")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    z = gumbel_z(alpha)
    two_log = 2.0 * math.log(coeff_count)
    root = math.sqrt(two_log)
    unit = root + (2.0 * z - math.log(math.log(coeff_count)) - math.log(math.pi)) / (2.0 * root)
    return NoiseEstimate(float(sigma), float(sigma) * unit, float(alpha), int(coeff_count), z)


def compute_mu2(A, C, beta2, beta3):
    """Adaptive l1 weight ``C * (beta2 + beta3) * max(A)``, clamped at zero."""
    return max(C * (beta2 + beta3) * float(np.max(A)), 0.0)
