import numpy as np
import pytest

from kreinfock.models import ETA0, MINKOWSKI, eta_theta_xi

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


METRICS = {
    "identity2": np.eye(2),
    "minus_identity2": -np.eye(2),
    "eta0": ETA0,
    "eta0_pair": np.kron(np.eye(2), ETA0),
    "minus_g": -MINKOWSKI,
    "theta_xi": eta_theta_xi(0.7, 2.1),
}
