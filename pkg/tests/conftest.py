"""Collects one verdict line per acceptance criterion and prints them at the end."""

ACCEPTANCE: dict[int, tuple[bool, str, list[str]]] = {}


def record(number: int, ok: bool, summary: str, details=()):
    ACCEPTANCE[number] = (ok, summary, list(details))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, summary, details = ACCEPTANCE[number]
        tr.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {summary}")
        for line in details:
            tr.write_line(f"    {line}")
