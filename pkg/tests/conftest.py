from __future__ import annotations

import pytest

_LOG_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_LOG_KEY] = {}


@pytest.fixture(scope="session")
def criterion_log(request):
    """criterion number -> (passed, description, detail), printed after the run."""
    return request.config.stash[_LOG_KEY]


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(_LOG_KEY, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(log):
        passed, desc, detail = log[k]
        line = f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {desc}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
