import pytest

ACCEPTANCE = []


def record_acceptance(number: int, ok: bool, detail: str, seconds: float, limit: float | None):
    timing = f"{seconds:.3f}s" + (f" (limit {limit:g}s)" if limit is not None else "")
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{timing}]"
    ACCEPTANCE.append((number, line))
    print(line)


@pytest.fixture
def acceptance():
    return record_acceptance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
