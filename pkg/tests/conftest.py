import math

import numpy as np
import pytest
from scipy import integrate, special

from logconvex.means import TaylorCoefficients


def oracle_f(lam, alpha, x):
    """Independent value of int_0^x t**lam (1-t)**alpha dt."""
    if alpha > -1:
        return special.betainc(lam + 1, alpha + 1, x) * special.beta(lam + 1, alpha + 1)
    val, _ = integrate.quad(lambda t: t ** lam * (1 - t) ** alpha, 0, x,
                            epsabs=0, epsrel=1e-13, limit=200)
    return val


@pytest.fixture
def one_plus_z():
    return TaylorCoefficients.of(1, 1)


@pytest.fixture
def sqrt2_z():
    return TaylorCoefficients.of(0, math.sqrt(2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
