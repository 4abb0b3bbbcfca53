import numpy as np
import pytest

from toepfactor import random_spd_toeplitz
from toepfactor.genmat import random_rhos

# The standard random ensemble shared by the property and acceptance suites.
ENSEMBLE_SIZES = (10, 20, 40, 80)
ENSEMBLE_RHO_MAX = (0.3, 0.5, 0.7)
ENSEMBLE_SEEDS = (0, 1, 2)

EXAMPLE_T = np.array([[25.0, 20.0, 15.0], [20.0, 32.0, 29.0], [15.0, 29.0, 40.0]])
EXAMPLE_U = np.array([[5.0, 4.0, 3.0], [0.0, 4.0, 4.25], [0.0, 0.0, 12.9375**0.5]])


def ensemble(max_n=None):
    """Yield ``(label, T, rhos)`` for every ensemble member with ``n <= max_n``."""
    for rho_max in ENSEMBLE_RHO_MAX:
        for n in ENSEMBLE_SIZES:
            if max_n is not None and n > max_n:
                continue
            for seed in ENSEMBLE_SEEDS:
                label = f"rho{rho_max}-n{n}-s{seed}"
                yield label, random_spd_toeplitz(n, rho_max, seed), random_rhos(n, rho_max, seed)


@pytest.fixture
def example_T():
    return EXAMPLE_T.copy()


@pytest.fixture
def example_U():
    return EXAMPLE_U.copy()


# Acceptance verdicts collected by test_acceptance.py, echoed after the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
