from fractions import Fraction

import pytest

from helpers import ACCEPTANCE
from pickroute import Depot, Pick, PickInstance, WarehouseLayout


@pytest.fixture
def single_example():
    """Three-aisle single-block example with a front depot in aisle 1."""
    layout = WarehouseLayout(1, 3, 12, 1, 3)
    picks = (Pick(1, 3), Pick(2, 4), Pick(2, 8), Pick(3, 2), Pick(3, 9))
    return PickInstance(layout, Depot(1, "front"), picks)


@pytest.fixture
def two_example():
    """Three-aisle two-block example; half-length slots put every pick 0.25 below its drawing."""
    layout = WarehouseLayout(2, 3, 12, Fraction(1, 2), 3, 1)
    picks = (Pick(1, 6, "lower"), Pick(2, 8, "lower"), Pick(2, 6, "upper"),
             Pick(3, 4, "lower"), Pick(3, 8, "upper"))
    return PickInstance(layout, Depot(1, "front"), picks)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        ok = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
