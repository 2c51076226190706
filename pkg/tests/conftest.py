import hypothesis
import numpy as np
import pytest

from tiecopula.ranks import RawSample

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

FAMILIES = ("clayton", "gumbel", "gaussian", "survival-clayton")


@pytest.fixture
def toy_sample():
    # ties at ranks {3, 4, 5} and {7, 8} in the first margin
    x = np.array([3.0, 1.0, 5.0, 3.0, 6.0, 3.0, 2.0, 4.0, 5.0])
    y = np.array([0.4, 0.1, 0.8, 0.2, 0.9, 0.5, 0.3, 0.6, 0.7])
    return RawSample(x, y)


@pytest.fixture
def rng():
    return np.random.default_rng(20161201)


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture
def verdict(request):
    """Record one pass/fail line for an acceptance criterion, then assert it."""

    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.acceptance_lines.append(line)
        print(line)
        assert ok, line

    return record
