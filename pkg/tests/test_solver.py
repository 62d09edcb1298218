import numpy as np
import pytest

from g3pd import SolverConfig, decompose_g3pd
from g3pd.image import mirror_pad
from g3pd.prox import estimate_sigma
from g3pd.solver import DIAGNOSTIC_FIELDS, G3PDSolver, NumericalError, relative_error_v

SMALL = SolverConfig(scales=3, angles_scale2=8, pad=0, iterations=3)


def periodic_diff(n, m, axis):
    """Dense matrix of the periodic forward difference on an n x m grid."""
    eye = np.eye(n * m).reshape(n * m, n, m)
    return (np.roll(eye, -1, axis=axis + 1) - eye).reshape(n * m, n * m).T


def warm_solver(rng, shape=(16, 16), cfg=SMALL, sweeps=2):
    s = G3PDSolver(rng.random(shape), cfg)
    for _ in range(sweeps):
        s.iterate()
    # random multipliers make every linear term active
    s.lam1 = tuple(1e-3 * rng.standard_normal(shape) for _ in range(2))
    s.lam2 = 1e-3 * rng.standard_normal(s.frame.coeff_count)
    s.lam3 = 1e-3 * rng.standard_normal(shape)
    return s


def test_u_update_solves_normal_equation(rng):
    for _ in range(3):
        s = warm_solver(rng)
        c = s.cfg
        s.update_u()
        d1, d2 = periodic_diff(16, 16, 0), periodic_diff(16, 16, 1)
        lhs = c.beta3 * np.eye(256) + c.beta1 * (d1.T @ d1 + d2.T @ d2)
        rhs = (
            c.beta3 * (s.f - s.v - s.eps).ravel()
            + s.lam3.ravel()
            + d1.T @ (c.beta1 * s.p[0] + s.lam1[0]).ravel()
            + d2.T @ (c.beta1 * s.p[1] + s.lam1[1]).ravel()
        )
        oracle = np.linalg.solve(lhs, rhs)
        assert np.linalg.norm(lhs @ s.u.ravel() - rhs) / np.linalg.norm(rhs) <= 1e-6
        np.testing.assert_allclose(s.u.ravel(), oracle, rtol=1e-9, atol=1e-12)


def perturbations(rng, x, count=20, scale=1e-3):
    for _ in range(count):
        yield x + scale * rng.standard_normal(x.shape)


def test_v_update_minimizes_its_subproblem(rng):
    s = warm_solver(rng)
    c = s.cfg
    s.update_v()
    mu2 = s.mu2

    def obj(v):
        cv = s.frame.forward(v)
        return (
            mu2 * np.abs(v).sum()
            + 0.5 * c.beta2 * np.sum((s.w - cv + s.lam2 / c.beta2) ** 2)
            + 0.5 * c.beta3 * np.sum((s.f - s.u - v - s.eps + s.lam3 / c.beta3) ** 2)
        )

    best = obj(s.v)
    assert all(obj(v) >= best - 1e-15 for v in perturbations(rng, s.v))


def test_p_and_w_updates_minimize_their_subproblems(rng):
    s = warm_solver(rng)
    c = s.cfg
    s.update_p()
    g1, g2 = np.roll(s.u, -1, 0) - s.u, np.roll(s.u, -1, 1) - s.u

    def obj_p(p1, p2):
        return (
            np.abs(p1).sum()
            + np.abs(p2).sum()
            + 0.5 * c.beta1 * (np.sum((p1 - g1 + s.lam1[0] / c.beta1) ** 2) + np.sum((p2 - g2 + s.lam1[1] / c.beta1) ** 2))
        )

    best = obj_p(*s.p)
    assert all(obj_p(q, s.p[1]) >= best - 1e-12 for q in perturbations(rng, s.p[0]))

    s.update_w()
    cv = s.frame.forward(s.v)

    def obj_w(w):
        return c.mu1 * np.abs(w).sum() + 0.5 * c.beta2 * np.sum((w - cv + s.lam2 / c.beta2) ** 2)

    best = obj_w(s.w)
    assert all(obj_w(w) >= best - 1e-12 for w in perturbations(rng, s.w))


def test_multiplier_steps_are_exact(rng):
    s = warm_solver(rng)
    c = s.cfg
    s.iterate()
    before = s.lam3.copy(), s.lam2.copy()
    s.update_multipliers()
    np.testing.assert_array_equal(s.lam3, before[0] + c.gamma * c.beta3 * (s.f - s.u - s.v - s.eps))
    np.testing.assert_array_equal(s.lam2, before[1] + c.gamma * c.beta2 * (s.w - s._cv))


def test_constant_image_is_all_cartoon():
    f = np.full((64, 64), 0.4)
    dec = decompose_g3pd(f, SolverConfig(iterations=5))
    assert np.max(np.abs(dec.u - f)) < 1e-12
    assert np.max(np.abs(dec.v)) < 1e-12
    assert np.max(np.abs(dec.eps)) < 1e-12


def test_noise_level_estimated_once_on_padded_input(fixture_image):
    f, _ = fixture_image
    dec = decompose_g3pd(f, SolverConfig(iterations=1))
    assert dec.diagnostics.sigma == estimate_sigma(mirror_pad(f, 15))
    assert dec.diagnostics.sigma == pytest.approx(0.02, rel=0.1)


def test_diagnostics_rows_and_csv(fixture_run, tmp_path):
    dec, _ = fixture_run
    d = dec.diagnostics
    assert [r.iter for r in d.records] == list(range(1, 21))
    assert len(d.mu2) == 20 and all(m >= 0 for m in d.mu2)
    d.to_csv(tmp_path / "d.csv", timing=False)
    lines = (tmp_path / "d.csv").read_text().splitlines()
    assert lines[0] == ",".join(DIAGNOSTIC_FIELDS)
    assert len(lines) == 21 and all(line.endswith(",") for line in lines[1:])


def test_output_shape_matches_input(fixture_run, fixture_image):
    dec, _ = fixture_run
    assert dec.u.shape == dec.v.shape == dec.eps.shape == fixture_image[0].shape


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_non_finite_state_raises(rng):
    s = G3PDSolver(rng.random((16, 16)), SMALL)
    s.lam3 = np.full((16, 16), np.inf)
    with pytest.raises(NumericalError) as info:
        s.iterate()
    assert info.value.subproblem == "u" and info.value.iteration == 1


def test_relative_error_conventions():
    z = np.zeros((2, 2))
    assert relative_error_v(z, z) == 0.0
    assert relative_error_v(np.ones((2, 2)), z) == np.inf
    assert relative_error_v(2 * np.ones((2, 2)), np.ones((2, 2))) == pytest.approx(1.0)


@pytest.mark.xfail(
    strict=True,
    reason="eps-update is a projection only for orthonormal transforms; the redundant frame overshoots",
)
def test_noise_coefficients_within_threshold(fixture_run):
    dec, _ = fixture_run
    last = dec.diagnostics.records[-1]
    assert last.sup_c_eps <= dec.diagnostics.delta * (1 + 1e-6)
