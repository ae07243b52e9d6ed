import hypothesis
import numpy as np
import pytest

from frontlab.grid import Grid
from frontlab.measure import DispersalMeasure, measure_from_config

np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture
def two_atom():
    return DispersalMeasure.from_atoms([(-1.0, 0.5), (1.0, 0.5)])


@pytest.fixture
def delta1():
    return DispersalMeasure.dirac(1.0)


@pytest.fixture
def uniform01():
    return measure_from_config({"density": {"kind": "uniform", "support": [0.0, 1.0], "nodes": 32}})


@pytest.fixture
def small_grid():
    return Grid(-20.0, 20.0, 401)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
