"""Three-part (cartoon / texture / noise) decomposition by ALM + ADMM.

The energy is

    ||grad u||_1 + mu1 ||C v||_1 + mu2 ||v||_1 + indicator(||C eps||_inf <= delta)
    subject to f = u + v + eps,

with ``C`` the curvelet frame. Splitting ``p = grad u`` and ``w = C v`` gives
five subproblems with closed-form solutions, swept once per outer iteration in
the order u, v, eps, p, w, followed by the three multiplier updates.
"""
import csv
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .config import SolverConfig
from .image import as_image, crop, mirror_pad
from .prox import compute_delta, compute_mu2, estimate_sigma, shrink
from .transforms.curvelet import get_frame
from .transforms.fourier import grad_periodic


class NumericalError(FloatingPointError):
    def __init__(self, subproblem, iteration):
        super().__init__(f"non-finite values in the {subproblem}-update at iteration {iteration}")
        self.subproblem = subproblem
        self.iteration = iteration


DIAGNOSTIC_FIELDS = (
    "iter",
    "rel_err_v",
    "constraint_residual",
    "sup_c_eps",
    "tv_u",
    "l1_cv",
    "l1_v",
    "ms",
)


@dataclass
class IterationRecord:
    iter: int
    rel_err_v: float
    constraint_residual: float
    sup_c_eps: float
    tv_u: float
    l1_cv: float
    l1_v: float
    ms: float


@dataclass
class Diagnostics:
    records: list = field(default_factory=list)
    sigma: float = 0.0
    delta: float = 0.0
    coeff_count: int = 0
    mu2: list = field(default_factory=list)
    theta: float = 0.0
    t1: float = 0.0

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])

    def to_csv(self, path, timing=True):
        """Write one row per iteration; ``timing=False`` leaves ``ms`` blank."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(DIAGNOSTIC_FIELDS)
            for r in self.records:
                row = [_fmt(v) for v in asdict(r).values()]
                if not timing:
                    row[-1] = ""
                writer.writerow(row)


def _fmt(v):
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def relative_error_v(v_new, v_old):
    """``||v_new - v_old|| / ||v_old||``; 0 when both vanish, inf when only v_old does."""
    denom = float(np.linalg.norm(v_old))
    num = float(np.linalg.norm(np.asarray(v_new) - np.asarray(v_old)))
    if denom == 0.0:
        return 0.0 if not np.any(v_new) else math.inf
    return num / denom


class G3PDSolver:
    """ADMM state for one (already padded) image.

    The sweep methods mutate the state in place; :meth:`iterate` runs one
    full outer iteration.
    """

    def __init__(self, f, cfg):
        self.f = as_image(f)
        self.cfg = cfg
        self.frame = get_frame(self.f.shape, cfg.scales, cfg.angles_scale2)
        shape = self.f.shape
        self.u = np.zeros(shape)
        self.v = np.zeros(shape)
        self.eps = np.zeros(shape)
        self.p = (np.zeros(shape), np.zeros(shape))
        self.w = np.zeros(self.frame.coeff_count)
        self.lam1 = (np.zeros(shape), np.zeros(shape))
        self.lam2 = np.zeros(self.frame.coeff_count)
        self.lam3 = np.zeros(shape)
        self.iter = 0
        self.mu2 = 0.0
        self._cv = np.zeros(self.frame.coeff_count)

        sigma = estimate_sigma(self.f)
        noise = compute_delta(sigma, self.frame.coeff_count, cfg.alpha)
        self.sigma = noise.sigma
        self.delta = noise.delta

        # symbols on the rfft half-plane
        w1 = 2.0 * np.pi * np.fft.fftfreq(shape[0])[:, None]
        w2 = 2.0 * np.pi * np.fft.rfftfreq(shape[1])[None, :]
        self._dt1 = np.exp(-1j * w1) - 1.0  # symbol of the adjoint of d1
        self._dt2 = np.exp(-1j * w2) - 1.0
        lap = 4.0 * (np.sin(w1 / 2.0) ** 2 + np.sin(w2 / 2.0) ** 2)
        self._denom = cfg.beta3 + cfg.beta1 * lap

    def _check(self, name, *arrays):
        for a in arrays:
            if not np.all(np.isfinite(a)):
                raise NumericalError(name, self.iter)

    def update_u(self):
        c = self.cfg
        rhs3 = c.beta3 * (self.f - self.v - self.eps) + self.lam3
        q1 = c.beta1 * self.p[0] + self.lam1[0]
        q2 = c.beta1 * self.p[1] + self.lam1[1]
        d = np.fft.rfft2(rhs3) + self._dt1 * np.fft.rfft2(q1) + self._dt2 * np.fft.rfft2(q2)
        self.u = np.fft.irfft2(d / self._denom, s=self.f.shape)
        self._check("u", self.u)

    def texture_field(self):
        """The pre-shrink texture estimate ``A`` of the v-subproblem."""
        c = self.cfg
        smooth = self.frame.adjoint(c.beta2 * self.w + self.lam2)
        data = c.beta3 * (self.f - self.u - self.eps) + self.lam3
        return (smooth + data) / (c.beta2 + c.beta3)

    def update_v(self):
        c = self.cfg
        a = self.texture_field()
        self.mu2 = compute_mu2(a, c.C, c.beta2, c.beta3)
        self.v = shrink(a, self.mu2 / (c.beta2 + c.beta3))
        self._check("v", self.v)

    def update_eps(self):
        q = self.f - self.u - self.v + self.lam3 / self.cfg.beta3
        coeffs = self.frame.forward(q)
        self.eps = q - self.frame.adjoint(shrink(coeffs, self.delta))
        self._check("eps", self.eps)

    def update_p(self):
        b1 = self.cfg.beta1
        g1, g2 = grad_periodic(self.u)
        self.p = (
            shrink(g1 - self.lam1[0] / b1, 1.0 / b1),
            shrink(g2 - self.lam1[1] / b1, 1.0 / b1),
        )
        self._check("p", *self.p)

    def update_w(self):
        c = self.cfg
        self._cv = self.frame.forward(self.v)
        self.w = shrink(self._cv - self.lam2 / c.beta2, c.mu1 / c.beta2)
        self._check("w", self.w)

    def update_multipliers(self):
        c = self.cfg
        g1, g2 = grad_periodic(self.u)
        self.lam1 = (
            self.lam1[0] + c.gamma * c.beta1 * (self.p[0] - g1),
            self.lam1[1] + c.gamma * c.beta1 * (self.p[1] - g2),
        )
        self.lam2 = self.lam2 + c.gamma * c.beta2 * (self.w - self._cv)
        self.lam3 = self.lam3 + c.gamma * c.beta3 * (self.f - self.u - self.v - self.eps)
        self._check("multiplier", self.lam1[0], self.lam1[1], self.lam2, self.lam3)

    def iterate(self):
        self.iter += 1
        self.update_u()
        self.update_v()
        self.update_eps()
        self.update_p()
        self.update_w()
        self.update_multipliers()

    def residual(self):
        fn = float(np.linalg.norm(self.f))
        r = float(np.linalg.norm(self.f - self.u - self.v - self.eps))
        return r / fn if fn > 0 else r


@dataclass
class Decomposition:
    u: np.ndarray
    v: np.ndarray
    eps: np.ndarray
    diagnostics: Diagnostics
    config: SolverConfig


def decompose_g3pd(f, cfg=None, callback=None):
    """Split ``f`` into cartoon ``u``, texture ``v`` and noise ``eps``.

    ``callback(solver)`` is invoked after every outer iteration (on the padded
    state) when given.
    """
    cfg = cfg or SolverConfig()
    f = as_image(f, "f")
    padded = mirror_pad(f, cfg.pad)
    solver = G3PDSolver(padded, cfg)
    diag = Diagnostics(
        sigma=solver.sigma,
        delta=solver.delta,
        coeff_count=solver.frame.coeff_count,
        theta=cfg.beta2 / (cfg.beta2 + cfg.beta3),
        t1=cfg.mu1 / cfg.beta2,
    )
    for _ in range(cfg.iterations):
        start = time.perf_counter()
        v_old = solver.v
        solver.iterate()
        elapsed = 1e3 * (time.perf_counter() - start)
        g1, g2 = grad_periodic(solver.u)
        diag.mu2.append(solver.mu2)
        diag.records.append(
            IterationRecord(
                iter=solver.iter,
                rel_err_v=relative_error_v(solver.v, v_old),
                constraint_residual=solver.residual(),
                sup_c_eps=float(np.max(np.abs(solver.frame.forward(solver.eps)))),
                tv_u=float(np.abs(g1).sum() + np.abs(g2).sum()),
                l1_cv=cfg.mu1 * float(np.abs(solver._cv).sum()),
                l1_v=solver.mu2 * float(np.abs(solver.v).sum()),
                ms=elapsed,
            )
        )
        if callback is not None:
            callback(solver)
    return Decomposition(
        crop(solver.u, cfg.pad),
        crop(solver.v, cfg.pad),
        crop(solver.eps, cfg.pad),
        diag,
        cfg,
    )
