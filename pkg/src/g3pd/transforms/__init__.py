"""Linear transforms used by the decomposition solver."""
from .curvelet import CurveletCoeffs, CurveletFrame, curvelet_adjoint, curvelet_forward
from .fourier import (
    div_backward,
    div_periodic,
    fft2,
    grad_forward,
    grad_periodic,
    ifft2,
    laplacian_symbol,
)
from .wavelet import dwt97_level1, idwt97_level1

__all__ = [
    "CurveletCoeffs",
    "CurveletFrame",
    "curvelet_adjoint",
    "curvelet_forward",
    "div_backward",
    "div_periodic",
    "dwt97_level1",
    "fft2",
    "grad_forward",
    "grad_periodic",
    "idwt97_level1",
    "ifft2",
    "laplacian_symbol",
]
