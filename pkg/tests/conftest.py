import numpy as np
import pytest

from haarmat.rng import RngStream

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return RngStream(20240601)


def random_quaternion_matrix(gen: np.random.Generator, n: int, m: int | None = None):
    from haarmat.quaternion import QuaternionArray

    return QuaternionArray(gen.standard_normal((n, m or n, 4)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
