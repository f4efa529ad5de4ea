import pytest


def pytest_addoption(parser):
    parser.addoption("--tier", choices=("fast", "long"), default="long",
                     help="'fast' skips tests marked long (minutes of compute); default runs everything")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--tier") == "long":
        return
    skip = pytest.mark.skip(reason="long tier; run with --tier long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    def report(label: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {label}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return report


@pytest.fixture
def tier(request):
    return request.config.getoption("--tier")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
