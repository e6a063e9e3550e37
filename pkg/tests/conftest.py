"""Shared pytest wiring: print one PASS/FAIL line per acceptance criterion."""

import re

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = {}
    for outcome in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            when = getattr(rep, "when", "call")
            if when != "call" and outcome == "passed":
                continue
            match = _CRITERION.search(rep.nodeid)
            if not match:
                continue
            num = int(match.group(1))
            label = match.group(2).replace("_", " ")
            if outcome == "passed":
                status = "PASS"
            elif outcome == "skipped":
                status = "SKIP"
            else:
                status = "FAIL"
            # a FAIL/SKIP verdict wins over PASS from another phase
            if results.get(num, ("PASS",))[0] == "PASS":
                results[num] = (status, label)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        status, label = results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {label}")
