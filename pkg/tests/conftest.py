import pytest

_acceptance: list[tuple[str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        ac_id, title = marker.args
        status = "PASS" if report.passed else "FAIL"
        _acceptance.append((ac_id, status, title))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for ac_id, status, title in sorted(_acceptance, key=lambda r: int(r[0].lstrip("AC"))):
        terminalreporter.write_line(f"[{status}] {ac_id} {title}")
