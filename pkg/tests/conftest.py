"""Shared pytest configuration.

Tests in test_acceptance.py named ``test_cNN_*`` are acceptance criteria.
Their outcome and any ``detail`` property they record are collected and
printed as one PASS/FAIL line per criterion at the end of the run.
"""

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "allow_retry(attempts): timing-sensitive check that retries before failing")


def _criterion(nodeid):
    path, _, name = nodeid.partition("::")
    if path.endswith("test_acceptance.py") and name.startswith("test_c"):
        return name
    return None


def pytest_runtest_logreport(report):
    name = _criterion(report.nodeid)
    if name is None:
        return
    if report.when == "call" or report.outcome != "passed":
        detail = dict(report.user_properties).get("detail", "")
        if report.failed and not detail:
            detail = report.longreprtext.strip().splitlines()[-1] if report.longreprtext else ""
        _criteria[name] = ("PASS" if report.passed else "SKIP" if report.skipped else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        status, detail = _criteria[name]
        label = name[len("test_"):]
        terminalreporter.write_line(f"{status} {label}: {detail}".rstrip(": "))
