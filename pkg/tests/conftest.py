import pytest

_LINES = {}


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion."""

    def record(number, text):
        _LINES[number] = text
    yield record
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and number_of(request) in _LINES:
        n = number_of(request)
        status = "PASS" if rep.passed else "FAIL"
        _LINES[n] = f"{status} criterion {n}: {_LINES[n]}"


def number_of(request):
    return int(request.node.name.split("_")[1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_LINES):
        line = _LINES[n]
        if not line.startswith(("PASS", "FAIL")):
            line = f"FAIL criterion {n}: {line}"
        terminalreporter.write_line(line)
