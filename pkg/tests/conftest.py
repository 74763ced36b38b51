"""Collects the acceptance-criterion verdicts and prints them after the run."""

import time
from contextlib import contextmanager

import pytest

_VERDICTS = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    verdicts = request.config.stash.setdefault(_VERDICTS, {})

    @contextmanager
    def record(number: int, title: str):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            detail = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            verdicts[number] = f"FAIL  criterion {number:>2}: {title} ({detail[:120]})"
            raise
        took = time.perf_counter() - start
        verdicts[number] = f"PASS  criterion {number:>2}: {title} [{took:.2f} s]"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    verdicts = config.stash.get(_VERDICTS, {})
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        terminalreporter.write_line(verdicts[number])
