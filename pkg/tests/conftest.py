import pytest

from bloat_lens.ingest import load_registry, parse_history

from helpers import FIXTURES

_acceptance_lines = []


@pytest.fixture(scope="session")
def registry():
    return load_registry(FIXTURES / "registry.json")


@pytest.fixture(scope="session")
def usage_demo(registry):
    return parse_history(FIXTURES / "usage_demo.json", registry)


@pytest.fixture(scope="session")
def upgrade_demo(registry):
    return parse_history(FIXTURES / "upgrade_demo.json", registry)


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""

    def record(number, text, passed):
        _acceptance_lines.append(f"AC{number:<2} {'PASS' if passed else 'FAIL'}  {text}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
