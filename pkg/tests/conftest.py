import pytest

# (criterion number, description) -> "PASS" | "FAIL", filled by test_acceptance
ACCEPTANCE_RESULTS: dict[tuple[int, str], str] = {}


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for (n, desc), status in sorted(ACCEPTANCE_RESULTS.items()):
        terminalreporter.write_line(f"ACCEPTANCE {n:2d} {status}: {desc}")
