import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    prev = _CRITERIA.get(n)
    failed = rep.failed or (prev is not None and prev[1] == "FAIL")
    if rep.when == "call" or rep.failed:
        _CRITERIA[n] = (title, "FAIL" if failed else "PASS", dict(item.user_properties))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status, props = _CRITERIA[n]
        extra = "".join(f" {k}={v}" for k, v in props.items())
        terminalreporter.write_line(f"criterion {n} ({title}): {status}{extra}")
