import time

_START = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import test_acceptance as acc

    if not acc.RESULTS:
        return
    elapsed = time.perf_counter() - _START
    terminalreporter.section("acceptance criteria")
    for line in acc.report_lines():
        terminalreporter.write_line(line)
    verdict = "PASS" if elapsed < acc.SUITE_BUDGET_S else "FAIL"
    terminalreporter.write_line(f"suite runtime {elapsed:.1f}s, budget {acc.SUITE_BUDGET_S:.0f}s: {verdict}")


def pytest_sessionfinish(session, exitstatus):
    # the runtime budget is part of criterion 10
    import sys

    acc = sys.modules.get("test_acceptance")
    if acc is not None and acc.RESULTS and time.perf_counter() - _START >= acc.SUITE_BUDGET_S:
        session.exitstatus = 1
