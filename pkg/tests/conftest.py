import pytest

_ACCEPTANCE = {}


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False,
                     help="run long jobs (E7 full verification)")


def pytest_configure(config):
    config.addinivalue_line("markers", "long: long-running job, enabled with --long")
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="long job; pass --long to run")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    key = (number, item.name)
    if report.when == "setup" and report.skipped:
        _ACCEPTANCE[key] = (title, "SKIP")
    elif report.when == "call" or (report.when == "setup" and report.failed):
        _ACCEPTANCE[key] = (title, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (number, name), (title, status) in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  [{name}]")
