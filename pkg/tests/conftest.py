import time

import pytest

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    number, title = mark.args
    row = _criteria.setdefault(number, {"title": title, "ok": True, "seconds": 0.0})
    row["ok"] &= rep.passed
    if rep.when == "call":
        row["seconds"] += rep.duration


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        row = _criteria[number]
        status = "PASS" if row["ok"] else "FAIL"
        terminalreporter.write_line(
            f"criterion {number:2d} {status}  {row['title']} ({row['seconds']:.2f} s)")


@pytest.fixture
def stopwatch():
    start = time.perf_counter()
    return lambda: time.perf_counter() - start
