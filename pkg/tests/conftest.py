import re

_results = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        _results[n] = _results.get(n, True) and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if _results[n] else 'FAIL'}")
