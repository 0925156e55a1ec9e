import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance verdicts, printed as one PASS/FAIL line per criterion at the end of the run
VERDICTS: dict = {}


@pytest.fixture
def verdict():
    def record(number: int, title: str, ok: bool, detail: str = ""):
        VERDICTS[number] = (title, bool(ok), detail)
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title}" + (f" [{detail}]" if detail else "")
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    ran = [i for i in terminalreporter.stats.get("passed", []) + terminalreporter.stats.get("failed", [])
           if "test_acceptance" in i.nodeid]
    if not ran and not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 13):
        if n in VERDICTS:
            title, ok, detail = VERDICTS[n]
            terminalreporter.line(f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {title}"
                                  + (f" [{detail}]" if detail else ""))
        else:
            terminalreporter.line(f"FAIL criterion {n:2d}: not evaluated (error or deselected)")
