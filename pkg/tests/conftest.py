import warnings

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def nilpotent():
    return np.array([[0, 2], [0, 0]], dtype=complex)


@pytest.fixture(autouse=True)
def _quiet_numba():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", module="numba")
        yield


def rand_matrix(n, seed):
    rng = np.random.default_rng(seed)
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import ROWS

    if ROWS:
        terminalreporter.section("acceptance criteria")
        for line in ROWS:
            terminalreporter.write_line(line)
