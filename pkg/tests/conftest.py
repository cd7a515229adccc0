import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = mark.args
        detail = ""
        for key, value in item.user_properties:
            if key == "detail":
                detail = value
        if report.failed:
            msg = str(report.longrepr.reprcrash.message) if hasattr(report.longrepr, "reprcrash") else ""
            detail = (detail + "; " if detail else "") + msg.splitlines()[0] if msg else detail
        _results[item.nodeid] = (number, title, report.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_results.values(), key=lambda r: (str(r[0]), r[1])):
        line = f"ACCEPTANCE {number}: {'PASS' if passed else 'FAIL'} {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
