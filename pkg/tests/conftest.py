import pytest

from albert_theta.enumerate import ShellCache

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def shell_cache(tmp_path_factory):
    return ShellCache(tmp_path_factory.mktemp("shells"))


@pytest.fixture(scope="session")
def acceptance_report():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
