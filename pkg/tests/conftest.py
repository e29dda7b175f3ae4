import sys, pathlib
sys.path.insert(0, str(pathlib.Path(__file__).parent))

import pathlib

import pytest

DATA = pathlib.Path(__file__).parent / "data"
ACCEPTANCE: list[tuple[str, bool, str]] = []


def record(criterion: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} {criterion}" + (f": {detail}" if detail else "")
    print(line)
    ACCEPTANCE.append((criterion, ok, detail))
    assert ok, line


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {criterion}" + (f": {detail}" if detail else ""))
