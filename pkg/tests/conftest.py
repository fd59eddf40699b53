import numpy as np
import pytest

from qplatesim import Grid

ACCEPTANCE_LINES = []


def record(criterion, measured, bound, passed, detail=""):
    line = f"criterion {criterion:>2}: {'PASS' if passed else 'FAIL'}  measured={measured:.4g}  bound={bound:.4g}"
    if detail:
        line += f"  ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def small_grid():
    return Grid(64, 32.0)
