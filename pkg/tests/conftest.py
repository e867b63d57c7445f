from __future__ import annotations

import pytest

# acceptance criteria append (name, passed, detail) here; printed at the end of the run
ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")


@pytest.fixture
def criterion():
    """Record one acceptance verdict and fail the test when it is negative."""

    def record(name: str, passed: bool, detail: str) -> None:
        ACCEPTANCE.append((name, bool(passed), detail))
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
        assert passed, f"{name}: {detail}"

    return record
