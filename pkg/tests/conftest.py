import numpy as np
import pytest

from spinstar.model import ModelSpec

ACCEPTANCE_LINES: list[str] = []


def random_model(rng, n, beta=None, alpha=1.0):
    if beta is None:
        beta = float(rng.choice([0.0, 1.0, 10.0]))
    return ModelSpec(tuple(rng.uniform(-1, 1, n)), tuple(rng.uniform(-1, 1, n)), alpha=alpha, beta=beta)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def fixture_model():
    """N=1, g=1, Omega=0 bath; at alpha*t = pi/8 the coherence ratio is cos(pi/4)."""
    return ModelSpec((1.0,), (0.0,), alpha=1.0, beta=1.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
