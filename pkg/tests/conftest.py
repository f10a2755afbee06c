import numpy as np
import pytest

from quncertainty.quantum import spin_component_measurement

_CRITERIA: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def criterion():
    """Record a one-line PASS/FAIL verdict for an acceptance criterion, then assert it."""

    def report(label: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else "")
        print(line)
        _CRITERIA.append(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def sx():
    return spin_component_measurement("x")


@pytest.fixture(scope="session")
def sy():
    return spin_component_measurement("y")


@pytest.fixture(scope="session")
def sz():
    return spin_component_measurement("z")
