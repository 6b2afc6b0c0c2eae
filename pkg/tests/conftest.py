import numpy as np
import pytest

from spinbell.observables import canonical_observables
from spinbell.states import singlet


@pytest.fixture(scope="session")
def obs():
    return canonical_observables()


@pytest.fixture(scope="session")
def psi():
    return singlet("3/2")


def random_unit_axis(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
