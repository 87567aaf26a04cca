import pytest

from deltapol.model import BoundState
from deltapol.response import BoxSpec, build_box_eigensystem

REFERENCE_BOX = BoxSpec(length=200.0, n_grid=4000, g=1.0, mu=1e-3)

_acceptance_lines = []


@pytest.fixture
def unit_state():
    return BoundState.from_g(1.0)


@pytest.fixture(scope="session")
def reference_eigensystem():
    return build_box_eigensystem(REFERENCE_BOX)


@pytest.fixture(scope="session")
def small_eigensystem():
    return build_box_eigensystem(BoxSpec(length=40.0, n_grid=801))


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion, then assert."""

    def record(label, ok, detail):
        _acceptance_lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
