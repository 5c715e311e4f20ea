import pytest

_results: dict[tuple[int, str], bool] = {}
_notes: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, name): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = tuple(marker.args)
    if report.when == "call" or report.failed:
        _results[key] = _results.get(key, True) and report.passed
    if report.when == "call":
        _notes.setdefault(key[0], []).extend(f"{k}: {v}" for k, v in item.user_properties)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (number, name), ok in sorted(_results.items()):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2} {name}")
        for note in _notes.get(number, []):
            terminalreporter.write_line(f"        {note}")
