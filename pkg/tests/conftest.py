import re
from collections import defaultdict

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")
_results: dict[int, list[bool]] = defaultdict(list)


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results[int(m.group(1))].append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        ok = all(_results[n])
        terminalreporter.write_line(f"CRITERION {n}: {'PASS' if ok else 'FAIL'}")
