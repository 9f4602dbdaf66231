import pytest

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _acceptance[name] = (report.outcome, getattr(report, "acceptance_detail", ""))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    detail = item.user_properties and dict(item.user_properties).get("detail")
    if detail:
        rep.acceptance_detail = detail


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda n: int(n.split("_")[1])):
        outcome, detail = _acceptance[name]
        status = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"{status}  {name}  {detail}")
