"""Synthetic test images with known ground truth."""
import numpy as np


def disk_mask(shape, radius, center=None):
    h, w = shape
    cy, cx = center if center is not None else ((h - 1) / 2.0, (w - 1) / 2.0)
    yy, xx = np.mgrid[:h, :w]
    return (((yy - cy) ** 2 + (xx - cx) ** 2) <= radius**2).astype(np.uint8)


def oriented_sinusoid(shape, period=8.0, angle=np.pi / 6, phase=0.0):
    h, w = shape
    yy, xx = np.mgrid[:h, :w].astype(np.float64)
    k = 2.0 * np.pi / period
    return np.sin(k * (xx * np.cos(angle) + yy * np.sin(angle)) + phase)


def sinusoid_disk(
    size=256,
    radius=80,
    period=8.0,
    amplitude=0.3,
    background=0.5,
    noise=0.02,
    angle=np.pi / 6,
    seed=0,
):
    """Ridge-like sinusoid inside a disk on a flat background, plus Gaussian noise.

    Returns ``(image, mask)``; ``noise`` is the standard deviation.
    """
    shape = (size, size)
    mask = disk_mask(shape, radius)
    clean = background + amplitude * oriented_sinusoid(shape, period, angle) * mask
    rng = np.random.default_rng(seed)
    return clean + noise * rng.standard_normal(shape), mask


def pure_noise(size=256, background=0.5, noise=0.02, seed=1):
    rng = np.random.default_rng(seed)
    return background + noise * rng.standard_normal((size, size))


def piecewise_constant(size=128, levels=(0.3, 0.7), noise=0.05, seed=2):
    """Two-level image (a square and a disk on a background). Returns ``(noisy, clean)``."""
    clean = np.full((size, size), levels[0])
    q = size // 4
    clean[q : size // 2, q : size // 2] = levels[1]
    clean += (levels[1] - levels[0]) * disk_mask((size, size), size // 6, (0.68 * size, 0.62 * size))
    clean = np.clip(clean, min(levels), max(levels))
    rng = np.random.default_rng(seed)
    return clean + noise * rng.standard_normal(clean.shape), clean


def disks_of_radii(size=128, radii=(3, 6, 30), background=0.2, level=0.8):
    """Flat disks of increasing radius on a flat background, spaced apart."""
    img = np.full((size, size), background)
    masks = []
    centres = [(size * 0.2, size * 0.2), (size * 0.2, size * 0.55), (size * 0.62, size * 0.55)]
    for r, c in zip(radii, centres):
        m = disk_mask((size, size), r, c)
        img[m == 1] = level
        masks.append(m)
    return img, masks


def psnr(estimate, clean, peak=1.0):
    mse = float(np.mean((np.asarray(estimate) - np.asarray(clean)) ** 2))
    return 10.0 * np.log10(peak**2 / mse)
