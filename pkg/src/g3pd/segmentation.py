"""From texture image to a single, hole-free foreground region.

Pixels with non-zero texture vote per ``s x s`` block; blocks are smoothed by
a neighbour-majority rule, reduced to their largest 4-connected component and
hole-filled, then expanded back to pixels.
"""
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from . import _accel
from .config import MorphologyConfig, SolverConfig
from .image import as_image, as_mask
from .solver import decompose_g3pd

FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)
EIGHT_CONNECTED = ndimage.generate_binary_structure(2, 2)


def binarize_texture(v):
    return (np.abs(as_image(v, "v")) > 0).astype(np.uint8)


def block_thresholds(shape, s, t):
    """Per-block count threshold; edge blocks scale ``t`` by their pixel share."""
    h, w = shape
    rows = np.minimum(s, h - s * np.arange(-(-h // s)))
    cols = np.minimum(s, w - s * np.arange(-(-w // s)))
    return t * np.outer(rows, cols) / float(s * s)


def smooth_blocks(blocks, b, max_passes):
    """Neighbour vote until nothing changes (or ``max_passes``)."""
    blocks = blocks.astype(np.uint8)
    for _ in range(max_passes):
        nb = _accel.neighbor_counts(blocks)
        new = blocks.copy()
        new[nb >= b] = 1
        new[(nb <= 8 - b) & (nb < b)] = 0
        if np.array_equal(new, blocks):
            break
        blocks = new
    return blocks


def largest_component(blocks):
    labels, count = ndimage.label(blocks, structure=FOUR_CONNECTED)
    if count == 0:
        return np.zeros_like(blocks, dtype=np.uint8)
    sizes = np.bincount(labels.ravel())[1:]
    # argmax picks the lowest label on ties, i.e. the first in raster order
    keep = int(np.argmax(sizes)) + 1
    return (labels == keep).astype(np.uint8)


def fill_holes(blocks):
    background, _ = ndimage.label(blocks == 0, structure=EIGHT_CONNECTED)
    border = np.unique(
        np.concatenate([background[0], background[-1], background[:, 0], background[:, -1]])
    )
    holes = (background > 0) & ~np.isin(background, border)
    out = blocks.astype(np.uint8).copy()
    out[holes] = 1
    return out


def block_morphology(binary, cfg=None):
    cfg = cfg or MorphologyConfig()
    binary = as_mask(binary, "binary")
    h, w = binary.shape
    if h < cfg.s or w < cfg.s:
        raise ValueError(f"image {binary.shape} smaller than one {cfg.s}x{cfg.s} block")
    counts = _accel.block_counts(binary, cfg.s)
    blocks = (counts > block_thresholds(binary.shape, cfg.s, cfg.t)).astype(np.uint8)
    for _ in range(cfg.max_smoothing_passes):
        previous = blocks
        blocks = smooth_blocks(blocks, cfg.b, cfg.max_smoothing_passes)
        blocks = fill_holes(largest_component(blocks))
        if np.array_equal(blocks, previous):
            break
    expanded = np.repeat(np.repeat(blocks, cfg.s, axis=0), cfg.s, axis=1)
    return np.ascontiguousarray(expanded[:h, :w], dtype=np.uint8)


@dataclass
class SegmentationResult:
    mask: np.ndarray
    v: np.ndarray
    diagnostics: object
    decomposition: object


def segment(f, solver_cfg=None, morph_cfg=None):
    """Decompose, binarize the texture and clean it into one ROI mask."""
    solver_cfg = solver_cfg or SolverConfig(iterations=4)
    morph_cfg = morph_cfg or MorphologyConfig()
    dec = decompose_g3pd(f, solver_cfg)
    mask = block_morphology(binarize_texture(dec.v), morph_cfg)
    return SegmentationResult(mask, dec.v, dec.diagnostics, dec)


def boundary(mask):
    mask = as_mask(mask).astype(bool)
    return mask & ~ndimage.binary_erosion(mask, structure=FOUR_CONNECTED, border_value=0)


def overlay(img, mask, value=1.0):
    """Copy of ``img`` with the ROI boundary drawn at intensity ``value``."""
    out = as_image(img).copy()
    out[boundary(mask)] = value
    return out
