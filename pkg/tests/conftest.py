"""Shared fixtures plus the one-line-per-criterion summary for the acceptance file."""

import re
from fractions import Fraction

import pytest

from expuiseux import NATURALS, parse_monoid, sr_new

_criteria = {}


@pytest.fixture(scope="session")
def sparse_monoid():
    return parse_monoid("elems:0,18,19,25,27;cond:36")


@pytest.fixture(scope="session")
def s23():
    return sr_new(Fraction(2, 3), NATURALS)


@pytest.fixture(scope="session")
def s52():
    return sr_new(Fraction(5, 2), NATURALS)


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m or report.when not in ("setup", "call"):
        return
    n = int(m.group(1))
    if report.failed or (report.when == "call" and n not in _criteria):
        _criteria[n] = ("PASS" if report.passed else "FAIL", m.group(2).replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, what = _criteria[n]
        terminalreporter.write_line(f"[{status}] criterion {n}: {what}")
