import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

_REPORT = []


class Criterion:
    """Sub-check recorder for one acceptance criterion."""

    def __init__(self, label):
        self.label = label
        self.checks = []
        _REPORT.append(self)

    def check(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))
        return bool(ok)

    def timed(self, name, limit, fn, *args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        dt = time.perf_counter() - t0
        self.check(f"{name} runtime < {limit:g} s", dt < limit, f"{dt:.2f} s")
        return out

    @property
    def passed(self):
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    def finish(self):
        failed = [f"{n} ({d})" for n, ok, d in self.checks if not ok]
        assert not failed, "; ".join(failed)


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for c in sorted(_REPORT, key=lambda c: int(c.label.split()[0])):
        tr.write_line(f"{'PASS' if c.passed else 'FAIL'}  criterion {c.label}")
        for name, ok, detail in c.checks:
            tr.write_line(f"      {'ok  ' if ok else 'FAIL'}  {name}{':  ' + detail if detail else ''}")
