import pytest

_LINES: list[str] = []


class AcceptanceReport:
    """Collects one PASS/FAIL line per acceptance criterion."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.checks: list[tuple[str, bool]] = []

    def check(self, label: str, ok: bool) -> bool:
        self.checks.append((label, bool(ok)))
        return bool(ok)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok in self.checks)

    def line(self) -> str:
        if not self.checks:
            return f"[FAIL] criterion {self.number} ({self.title}): no checks completed"
        failed = [label for label, ok in self.checks if not ok]
        detail = "; ".join(label for label, _ in self.checks) if not failed else "FAILED: " + "; ".join(failed)
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number} ({self.title}): {detail}"


@pytest.fixture
def acceptance():
    reports = []

    def make(number, title):
        r = AcceptanceReport(number, title)
        reports.append(r)
        return r

    yield make
    for r in reports:
        _LINES.append(r.line())


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split("criterion ")[1].split()[0])):
            terminalreporter.write_line(line)
