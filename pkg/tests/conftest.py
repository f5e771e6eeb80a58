import pytest
from hypothesis import settings

# Reproducible property tests: derandomized, no wall-clock deadline (some
# examples build 9x9 solves which are fast but jittery under load).
settings.register_profile("repo", derandomize=True, max_examples=80, deadline=None)
settings.load_profile("repo")

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion.

    The lines are echoed into the terminal summary so they are visible even
    when pytest captures per-test output.
    """

    def record(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {detail}"
        _ACCEPTANCE_LINES.append((number, line))
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
