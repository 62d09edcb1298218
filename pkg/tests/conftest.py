import numpy as np
import pytest

from g3pd import SolverConfig, decompose_g3pd
from g3pd.fixtures import sinusoid_disk

# criterion id -> (status, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def fixture_image():
    return sinusoid_disk()


@pytest.fixture(scope="session")
def fixture_run(fixture_image):
    """The 256x256 fixture decomposed with default parameters and N = 20."""
    f, mask = fixture_image
    v_hist = {}

    def keep(solver):
        if solver.iter in (5, 20):
            v_hist[solver.iter] = solver.v.copy()

    dec = decompose_g3pd(f, SolverConfig(iterations=20), callback=keep)
    return dec, v_hist


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split(".")[0]), k)):
        status, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:5s} {status:7s} {detail}")
