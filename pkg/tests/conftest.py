"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

from collections import defaultdict

import pytest

_OUTCOMES = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    report = outcome.get_result()
    # a criterion test counts once: its call phase, or a setup that failed or skipped
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _OUTCOMES[marker.args[0]].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        status = "PASS" if all(_OUTCOMES[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}")
