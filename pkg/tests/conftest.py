"""Acceptance bookkeeping: tests marked ``criterion("ACn")`` are grouped and
summarised as one PASS/FAIL line per criterion at the end of the run."""
from collections import OrderedDict

import pytest

_results: "OrderedDict[str, list]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(tag): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        tag = mark.args[0]
        _results.setdefault(tag, []).append((item.name, rep.passed, mark.kwargs.get("title", "")))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for tag in sorted(_results, key=lambda t: int(t[2:])):
        entries = _results[tag]
        title = next((t for _, _, t in entries if t), "")
        failed = [name for name, ok, _ in entries if not ok]
        status = "PASS" if not failed else "FAIL"
        detail = f"{len(entries) - len(failed)}/{len(entries)} checks"
        if failed:
            detail += "; failing: " + ", ".join(failed)
        terminalreporter.write_line(f"{tag} {status}  {title} ({detail})")
