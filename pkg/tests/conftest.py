import re

import pytest

_CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::(test_criterion_(\d+)_\w+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[m.group(1)] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        n, label = re.match(r"test_criterion_(\d+)_(\w+)", name).groups()
        terminalreporter.write_line(f"criterion {int(n):2d} {label:<24} {_CRITERIA[name]}")
    passed = sum(v == "PASS" for v in _CRITERIA.values())
    terminalreporter.write_line(f"{passed}/{len(_CRITERIA)} criteria pass")


class Checks:
    """Collects named sub-checks so one failure does not hide the others."""

    def __init__(self):
        self.items: list[tuple[str, bool, str]] = []

    def __call__(self, name: str, ok, detail: str = "") -> bool:
        self.items.append((name, bool(ok), detail))
        return bool(ok)

    def close(self):
        lines = [f"{'ok  ' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in self.items]
        print("\n".join(lines))
        failed = [line for line, (_, ok, _) in zip(lines, self.items) if not ok]
        assert not failed, "\n".join(failed)


@pytest.fixture
def checks():
    return Checks()
