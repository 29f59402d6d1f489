import contextlib
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_RESULTS_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS_KEY] = {}


@pytest.fixture
def acceptance(request):
    """Context manager recording PASS/FAIL for a numbered criterion."""
    results = request.config.stash[_RESULTS_KEY]

    @contextlib.contextmanager
    def criterion(number, title):
        try:
            yield
        except BaseException:
            results[number] = ("FAIL", title)
            raise
        results.setdefault(number, ("PASS", title))

    return criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_RESULTS_KEY]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        status, title = results[number]
        terminalreporter.write_line(f"{status} criterion {number:2d}: {title}")
