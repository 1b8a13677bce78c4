from pathlib import Path

import pytest

from mtlcheck import load_spec_file, parse_csv_log

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def hiring_log():
    return parse_csv_log(DATA / "hiring_log.csv")


@pytest.fixture(scope="session")
def hiring_specs():
    return {s.name: s for s in load_spec_file(DATA / "hiring.spec")}


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for the acceptance criterion run by this test."""
    import time

    t0 = time.perf_counter()
    notes: dict = {}
    yield notes
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    extra = "; ".join(f"{k}={v}" for k, v in notes.items())
    line = (f"{'PASS' if ok else 'FAIL'}  {request.node.name}  "
            f"({time.perf_counter() - t0:.2f} s{'; ' + extra if extra else ''})")
    ACCEPTANCE_LINES.append(line)
    print("\n" + line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
