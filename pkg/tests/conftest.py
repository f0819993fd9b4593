"""Collects acceptance outcomes and prints one line per criterion."""
from collections import defaultdict

import pytest

_results: dict[int, list[str]] = defaultdict(list)
_titles: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number n")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _titles[m.args[0]] = m.args[1]
            # also counts tests that fail to set up
            _results[m.args[0]]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _results[m.args[0]].append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        outs = _results[n]
        ok = bool(outs) and all(o == "passed" for o in outs)
        status = "PASS" if ok else ("NOT RUN" if not outs else "FAIL")
        tr.write_line(f"criterion {n:2d}: {status:7s} {_titles[n]} ({len(outs)} test(s))")
