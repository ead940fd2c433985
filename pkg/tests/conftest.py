import time

import pytest

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, limit): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title, limit = mark.args
    entry = _criteria.setdefault(number, {"title": title, "limit": limit, "ok": True,
                                          "seconds": 0.0})
    entry["ok"] &= rep.passed
    entry["seconds"] += rep.duration


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        c = _criteria[number]
        status = "PASS" if c["ok"] else "FAIL"
        terminalreporter.write_line(
            f"criterion {number:>2}: {status}  {c['title']} "
            f"({c['seconds']:.2f} s, limit {c['limit']} s)")


@pytest.fixture
def stopwatch():
    start = time.perf_counter()
    return lambda: time.perf_counter() - start
