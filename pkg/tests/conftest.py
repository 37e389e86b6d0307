import os
import random

import pytest
from hypothesis import HealthCheck, settings

SEED = int(os.environ.get("ARTIFACT_SEED", "20240611"))

settings.register_profile("artifact", derandomize=True, max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("artifact")


@pytest.fixture
def rng():
    return random.Random(SEED)


_LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""
    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        request.config.stash.setdefault(_LINES, []).append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
