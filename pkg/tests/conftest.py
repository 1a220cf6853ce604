import os
import time
from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "modspace",
    max_examples=int(os.environ.get("MODSPACE_HYPOTHESIS_EXAMPLES", "25")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("modspace")

_CRITERIA: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str, budget: float):
    """Run one acceptance criterion: time it, enforce its budget, log one line."""
    start = time.perf_counter()
    details: list[str] = []
    try:
        yield details
        elapsed = time.perf_counter() - start
        assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget:g}s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        _CRITERIA[number] = f"FAIL  {number}. {title} ({elapsed:.2f}s) {type(exc).__name__}: {exc}"
        raise
    detail = f" [{'; '.join(details)}]" if details else ""
    _CRITERIA[number] = f"PASS  {number}. {title} ({elapsed:.2f}s < {budget:g}s){detail}"


@pytest.fixture
def acceptance():
    return criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[n])
