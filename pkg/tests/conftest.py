import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

# criterion number -> (title, list of outcomes)
_CRITERIA: dict[int, tuple[str, list[str]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        num, title = mark.args
        state = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
        _CRITERIA.setdefault(num, (title, []))[1].append(state)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, states = _CRITERIA[num]
        if "FAIL" in states:
            verdict = "FAIL"
        elif "PASS" in states:
            verdict = "PASS" if "SKIP" not in states else "PASS (some parts skipped)"
        else:
            verdict = "SKIP"
        terminalreporter.write_line(f"criterion {num:2d}: {verdict:<5} {title}")
