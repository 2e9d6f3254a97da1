import time
from contextlib import contextmanager

import pytest

_RESULTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_RESULTS] = []


@pytest.fixture
def criterion(request):
    """Context manager that times a block and records one pass/fail line for it."""
    results = request.config.stash[_RESULTS]

    @contextmanager
    def run(name: str, limit_s: float):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            results.append(f"FAIL {name} ({time.perf_counter() - start:.1f}s): {exc}".splitlines()[0])
            raise
        elapsed = time.perf_counter() - start
        if elapsed >= limit_s:
            results.append(f"FAIL {name} ({elapsed:.1f}s): over the {limit_s:g}s budget")
            pytest.fail(f"{name} took {elapsed:.1f}s, budget {limit_s:g}s")
        results.append(f"PASS {name} ({elapsed:.1f}s)")

    return run


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_RESULTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
