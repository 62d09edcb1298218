"""Hot elementwise and block kernels.

Each kernel has a numba-compiled body and a pure-numpy twin with identical
results. Set ``G3PD_NUMBA=0`` in the environment to force the numpy path
(the flag is read once, at import).
"""
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("G3PD_NUMBA", "1").strip().lower() not in (
    "0",
    "false",
    "no",
    "off",
)


def shrink_numpy(x, alpha):
    mag = np.abs(x) - alpha
    np.maximum(mag, 0.0, out=mag)
    return np.sign(x) * mag


def block_counts_numpy(binary, s):
    h, w = binary.shape
    gh, gw = -(-h // s), -(-w // s)
    padded = np.zeros((gh * s, gw * s), dtype=np.int64)
    padded[:h, :w] = binary
    return padded.reshape(gh, s, gw, s).sum(axis=(1, 3))


def neighbor_counts_numpy(blocks):
    padded = np.pad(blocks.astype(np.int64), 1)
    h, w = blocks.shape
    total = np.zeros((h, w), dtype=np.int64)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                total += padded[1 + di : 1 + di + h, 1 + dj : 1 + dj + w]
    return total


if HAVE_NUMBA:

    @njit(cache=True)
    def _shrink_flat(x, alpha, out):
        for i in range(x.size):
            v = x[i]
            if v > alpha:
                out[i] = v - alpha
            elif v < -alpha:
                out[i] = v + alpha
            else:
                out[i] = 0.0

    @njit(cache=True)
    def _block_counts(binary, s, out):
        h, w = binary.shape
        for i in range(h):
            bi = i // s
            for j in range(w):
                if binary[i, j]:
                    out[bi, j // s] += 1

    @njit(cache=True)
    def _neighbor_counts(blocks, out):
        h, w = blocks.shape
        for i in range(h):
            for j in range(w):
                c = 0
                for di in range(-1, 2):
                    for dj in range(-1, 2):
                        if di == 0 and dj == 0:
                            continue
                        ii = i + di
                        jj = j + dj
                        if 0 <= ii < h and 0 <= jj < w and blocks[ii, jj]:
                            c += 1
                out[i, j] = c

    def shrink_numba(x, alpha):
        x = np.ascontiguousarray(x, dtype=np.float64)
        out = np.empty_like(x)
        _shrink_flat(x.reshape(-1), float(alpha), out.reshape(-1))
        return out

    def block_counts_numba(binary, s):
        h, w = binary.shape
        out = np.zeros((-(-h // s), -(-w // s)), dtype=np.int64)
        _block_counts(np.ascontiguousarray(binary, dtype=np.uint8), int(s), out)
        return out

    def neighbor_counts_numba(blocks):
        out = np.zeros(blocks.shape, dtype=np.int64)
        _neighbor_counts(np.ascontiguousarray(blocks, dtype=np.uint8), out)
        return out


if USE_NUMBA:
    shrink_kernel = shrink_numba
    block_counts = block_counts_numba
    neighbor_counts = neighbor_counts_numba
else:
    shrink_kernel = shrink_numpy
    block_counts = block_counts_numpy
    neighbor_counts = neighbor_counts_numpy
