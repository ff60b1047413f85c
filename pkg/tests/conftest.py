import pytest

from cadjust.fixtures import NAMES, load


@pytest.fixture(scope="session")
def figs():
    return {name: load(name) for name in NAMES}


@pytest.fixture
def fig1(figs):
    return figs["fig1"]


@pytest.fixture
def fig3a(figs):
    return figs["fig3a"]


@pytest.fixture
def fig3b(figs):
    return figs["fig3b"]


@pytest.fixture
def fig3c(figs):
    return figs["fig3c"]


@pytest.fixture
def fig4(figs):
    return figs["fig4"]


@pytest.fixture
def fig5(figs):
    return figs["fig5"]


_LINES_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_line(request):
    """Record one PASS/FAIL line; the lines are repeated in the terminal summary."""
    lines = request.config.stash.setdefault(_LINES_KEY, [])

    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
