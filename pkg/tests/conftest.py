import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

H = math.sqrt(2) / 2
EXAMPLE2 = np.array([[1.0, 0.0, H], [0.0, 1.0, H]])
A2 = np.array([[2.0, 0.0, 1.0], [0.0, 2.0, 1.0]])

DATA = Path(__file__).parent / "data"


@pytest.fixture
def example2():
    return EXAMPLE2.copy()


@pytest.fixture
def a2():
    return A2.copy()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
