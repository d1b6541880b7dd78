import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=100, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_sessionstart(session):
    # theta gate: a wrong default theta poisons every later result
    from odekit.verify import ThetaGateError, theta_gate

    try:
        theta_gate()
    except ThetaGateError as exc:
        pytest.exit(str(exc), returncode=3)


_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def criterion(request):
    """record(n, ok, detail): one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash[_LINES]

    def record(n, ok, detail):
        line = f"criterion {n} {'PASS' if ok else 'FAIL'}: {detail}"
        lines.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
