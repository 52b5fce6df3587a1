import math

import numpy as np
import pytest

import acceptance_log
from papr_admm.signal import OfdmConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def cfg_small():
    return OfdmConfig(n_subcarriers=4, oversampling=2)


@pytest.fixture
def cfg_paper():
    return OfdmConfig(n_subcarriers=512, oversampling=4)


def qfunc(x):
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def crandn(rng, n, scale=1.0):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)


def pytest_terminal_summary(terminalreporter):
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_log.LINES):
            terminalreporter.write_line(line)
