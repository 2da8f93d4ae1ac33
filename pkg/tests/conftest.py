from __future__ import annotations

import pytest

from valgraph.models import (FiniteField, FunctionFieldSemiLocal, LaurentLocal, Quaternion,
                             RationalCongruence)


@pytest.fixture(scope="session")
def ff17():
    return FiniteField(17, 4)


@pytest.fixture(scope="session")
def laurent():
    return LaurentLocal(4, 2, 8)


@pytest.fixture(scope="session")
def semi():
    return FunctionFieldSemiLocal(4, (0, 1), 2)


@pytest.fixture(scope="session")
def quat():
    return Quaternion(17)


@pytest.fixture(scope="session")
def rat():
    return RationalCongruence(3, 7)


# one summary line per acceptance criterion ------------------------------------
_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    num = int(name.split("_")[2])
    if report.when == "call" or report.outcome == "failed":
        prev = _CRITERIA.get(num)
        if prev is None or prev[0] == "pass":
            _CRITERIA[num] = ("pass" if report.outcome == "passed" else "FAIL", report.duration, name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        state, dur, name = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d}: {state}  ({dur:.2f} s)  {name}")
