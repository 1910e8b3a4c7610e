import numpy as np
import pytest

from nophase.problem import Coefficient


def sech2(t):
    t = np.asarray(t, dtype=float)
    return 1.0 + 1.0 / np.cosh(t) ** 2


def dsech2(t):
    t = np.asarray(t, dtype=float)
    return -2.0 * np.sinh(t) / np.cosh(t) ** 3


def d2sech2(t):
    t = np.asarray(t, dtype=float)
    return (4.0 * np.sinh(t) ** 2 - 2.0) / np.cosh(t) ** 4


def make_sech_coefficient(a=-3.0, b=3.0, extension_width=4.0):
    return Coefficient.make(sech2, a, b, dq=dsech2, d2q=d2sech2,
                            extension_width=extension_width)


def make_constant_coefficient(value=1.0, a=0.0, b=1.0):
    def q(t):
        return np.full_like(np.asarray(t, dtype=float), value)

    def zero(t):
        return np.zeros_like(np.asarray(t, dtype=float))

    return Coefficient.make(q, a, b, dq=zero, d2q=zero)


# PASS/FAIL lines recorded by the acceptance tests, echoed after the run
# (the terminal summary is never swallowed by output capture)
acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)


@pytest.fixture
def sech_coefficient():
    return make_sech_coefficient()
