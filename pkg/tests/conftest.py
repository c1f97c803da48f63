from __future__ import annotations

import pytest

# filled by test_acceptance.record(); printed once at the end of the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {line}")


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)
