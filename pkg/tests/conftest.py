"""Shared fixtures and the acceptance summary.

Tests marked ``@pytest.mark.criterion(n)`` are collected into a short
table printed at the end of the run, one line per criterion.  A test may
attach a one-line explanation with ``record_property("detail", ...)``.
"""
import pytest

from spinwork import KernelSet, Ohmic, SystemConfig

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    detail = dict(item.user_properties).get("detail", "")
    status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
    _CRITERIA[(mark.args[0], item.name)] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (n, name), (status, detail) in sorted(_CRITERIA.items()):
        line = f"criterion {n:>2} {status} {name}"
        terminalreporter.write_line(f"{line}: {detail}" if detail else line)


@pytest.fixture
def fig1_system():
    ks = KernelSet(Ohmic(1.0, 1.0), 10.0)
    return SystemConfig(0.01, ks, -0.8)
