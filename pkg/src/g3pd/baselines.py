"""Two-part TV decompositions used for comparison.

Both use the anisotropic periodic TV, the split ``p = grad u`` and an FFT
u-solve, mirroring the three-part solver. Penalties are scaled by the dynamic
range of the input, which makes the iterates exactly equivariant under
intensity scaling.
"""
import numpy as np

from .image import as_image, crop, mirror_pad
from .prox import shrink
from .transforms.fourier import grad_periodic


def _symbols(shape):
    w1 = 2.0 * np.pi * np.fft.fftfreq(shape[0])[:, None]
    w2 = 2.0 * np.pi * np.fft.rfftfreq(shape[1])[None, :]
    lap = 4.0 * (np.sin(w1 / 2.0) ** 2 + np.sin(w2 / 2.0) ** 2)
    return np.exp(-1j * w1) - 1.0, np.exp(-1j * w2) - 1.0, lap


def _scale(f):
    span = float(f.max() - f.min())
    return span if span > 0 else 1.0


def decompose_tv_l2(f, lam, iterations=200, pad=15, penalty=10.0):
    """ROF split ``f = u + v`` minimizing ``||grad u||_1 + lam/2 ||f - u||^2``."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    f0 = as_image(f, "f")
    f = mirror_pad(f0, pad)
    beta = penalty / _scale(f)
    dt1, dt2, lap = _symbols(f.shape)
    denom = lam + beta * lap
    ff = np.fft.rfft2(f)
    u = f.copy()
    p1 = np.zeros_like(f)
    p2 = np.zeros_like(f)
    l1 = np.zeros_like(f)
    l2 = np.zeros_like(f)
    for _ in range(iterations):
        rhs = lam * ff + dt1 * np.fft.rfft2(beta * p1 + l1) + dt2 * np.fft.rfft2(beta * p2 + l2)
        u = np.fft.irfft2(rhs / denom, s=f.shape)
        g1, g2 = grad_periodic(u)
        p1 = shrink(g1 - l1 / beta, 1.0 / beta)
        p2 = shrink(g2 - l2 / beta, 1.0 / beta)
        l1 = l1 + beta * (p1 - g1)
        l2 = l2 + beta * (p2 - g2)
    if not np.all(np.isfinite(u)):
        raise FloatingPointError("non-finite values in TV-L2 iteration")
    u = crop(u, pad)
    return u, f0 - u


def decompose_tv_l1(f, lam, iterations=300, pad=15, penalty=10.0):
    """Split ``f = u + v`` minimizing ``||grad u||_1 + lam ||f - u||_1``."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    f0 = as_image(f, "f")
    f = mirror_pad(f0, pad)
    b1 = penalty / _scale(f)
    b2 = b1
    dt1, dt2, lap = _symbols(f.shape)
    denom = b2 + b1 * lap
    u = f.copy()
    z = np.zeros_like(f)
    p1 = np.zeros_like(f)
    p2 = np.zeros_like(f)
    l1 = np.zeros_like(f)
    l2 = np.zeros_like(f)
    lz = np.zeros_like(f)
    for _ in range(iterations):
        rhs = (
            np.fft.rfft2(b2 * (f - z) - lz)
            + dt1 * np.fft.rfft2(b1 * p1 + l1)
            + dt2 * np.fft.rfft2(b1 * p2 + l2)
        )
        u = np.fft.irfft2(rhs / denom, s=f.shape)
        g1, g2 = grad_periodic(u)
        p1 = shrink(g1 - l1 / b1, 1.0 / b1)
        p2 = shrink(g2 - l2 / b1, 1.0 / b1)
        z = shrink(f - u - lz / b2, lam / b2)
        l1 = l1 + b1 * (p1 - g1)
        l2 = l2 + b1 * (p2 - g2)
        lz = lz + b2 * (z - f + u)
    if not np.all(np.isfinite(u)):
        raise FloatingPointError("non-finite values in TV-L1 iteration")
    u = crop(u, pad)
    return u, f0 - u
