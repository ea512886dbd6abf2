"""Collects the outcome of every ``criterion``-marked test for a summary table."""
import pytest

_RESULTS: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and rep.passed:
        return
    number, title = mark.args
    prev = _RESULTS.get(number)
    status = "PASS" if rep.passed else "FAIL"
    if prev is not None and prev[1] == "FAIL":
        status = "FAIL"
    _RESULTS[number] = (title, status, rep.duration + (prev[2] if prev else 0.0))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, status, secs = _RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}  {status}  {title}  ({secs:.1f} s)")
