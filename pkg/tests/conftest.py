import pytest

# filled in by test_acceptance.py: criterion number -> (title, passed, detail)
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}: {detail}")


@pytest.fixture
def record():
    def _record(n, title, ok, detail):
        ACCEPTANCE[n] = (title, bool(ok), detail)
        print(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}: {detail}")
        assert ok, f"criterion {n} ({title}) failed: {detail}"

    return _record
