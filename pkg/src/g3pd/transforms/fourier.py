"""FFT wrappers and discrete gradient / divergence pairs.

Two boundary conventions are provided. The Neumann pair (``grad_forward`` /
``div_backward``) is the classical one for TV; the periodic pair is the one
diagonalized by the DFT and is what the FFT-based u-solve is exact for.
"""
import numpy as np


def fft2(img):
    """Unnormalized forward DFT; ``ifft2(fft2(x)) == x``."""
    return np.fft.fft2(np.asarray(img, dtype=np.float64))


def ifft2(spec):
    return np.fft.ifft2(spec)


def grad_forward(u):
    """Forward differences along rows (first) and columns (second), zero at the far edge."""
    u = np.asarray(u, dtype=np.float64)
    g1 = np.zeros_like(u)
    g2 = np.zeros_like(u)
    g1[:-1, :] = u[1:, :] - u[:-1, :]
    g2[:, :-1] = u[:, 1:] - u[:, :-1]
    return g1, g2


def div_backward(q):
    """Negative adjoint of :func:`grad_forward`."""
    q1, q2 = (np.asarray(c, dtype=np.float64) for c in q)
    d = np.zeros_like(q1)
    d[0, :] += q1[0, :]
    d[1:-1, :] += q1[1:-1, :] - q1[:-2, :]
    d[-1, :] -= q1[-2, :]
    d[:, 0] += q2[:, 0]
    d[:, 1:-1] += q2[:, 1:-1] - q2[:, :-2]
    d[:, -1] -= q2[:, -2]
    return d


def grad_periodic(u):
    u = np.asarray(u, dtype=np.float64)
    return np.roll(u, -1, axis=0) - u, np.roll(u, -1, axis=1) - u


def div_periodic(q):
    """Negative adjoint of :func:`grad_periodic`."""
    q1, q2 = q
    return (q1 - np.roll(q1, 1, axis=0)) + (q2 - np.roll(q2, 1, axis=1))


def frequency_grid(shape):
    """Angular frequencies (w1, w2) in [-pi, pi) laid out in FFT order."""
    w1 = 2.0 * np.pi * np.fft.fftfreq(shape[0])
    w2 = 2.0 * np.pi * np.fft.fftfreq(shape[1])
    return w1[:, None], w2[None, :]


def laplacian_symbol(shape):
    """DFT symbol 4[sin^2(w1/2) + sin^2(w2/2)] of ``-div_periodic(grad_periodic(.))``."""
    w1, w2 = frequency_grid(shape)
    return 4.0 * (np.sin(w1 / 2.0) ** 2 + np.sin(w2 / 2.0) ** 2)
