import pytest

_LINES = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; printed again in the terminal summary."""

    def emit(label, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}"
        print(line)
        _LINES.append(line)
        return passed

    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
