from __future__ import annotations

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: criterion(key, passed, detail)."""
    results = request.config.stash[_RESULTS]

    def record(key: str, passed: bool, detail: str = "") -> bool:
        prev = results.get(key)
        if prev is not None:
            passed = passed and prev[0]
            detail = "; ".join(x for x in (prev[1], detail) if x)
        results[key] = (passed, detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: int(k.split()[0])):
        passed, detail = results[key]
        line = f"{'PASS' if passed else 'FAIL'}  {key}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
