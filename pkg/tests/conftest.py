import pytest

ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.fixture
def acceptance_report():
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def report(name: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
        ACCEPTANCE_RESULTS[name] = line
        print(line)

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for name in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(ACCEPTANCE_RESULTS[name])
