import pytest

RESULTS = {}


def pytest_addoption(parser):
    parser.addoption("--time-budget-ms", type=float, default=60000.0,
                     help="budget for the slow exact-table rows (0 skips them)")


@pytest.fixture
def time_budget_ms(request):
    return request.config.getoption("--time-budget-ms")


@pytest.fixture
def criterion():
    def record(key, status, detail=""):
        RESULTS[key] = (status, detail)
        line = f"criterion {key}: {status}" + (f" - {detail}" if detail else "")
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: (int(str(k).rstrip("abcdefgh")), str(k))):
        status, detail = RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {status}" + (f" - {detail}" if detail else ""))
