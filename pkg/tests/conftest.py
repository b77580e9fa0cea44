import time

import pytest

_ACCEPTANCE = {}


class _Criterion:
    def __init__(self, number, title, budget_s):
        self.number, self.title, self.budget_s = number, title, budget_s
        self.start = time.perf_counter()
        self.elapsed = None

    def stop(self):
        self.elapsed = time.perf_counter() - self.start
        return self.elapsed


@pytest.fixture
def criterion(request):
    made = []

    def start(number, title, budget_s):
        c = _Criterion(number, title, budget_s)
        made.append(c)
        return c

    yield start
    for c in made:
        rep = getattr(request.node, "rep_call", None)
        passed = rep is not None and rep.passed
        _ACCEPTANCE[c.number] = (c.title, passed, c.elapsed, c.budget_s)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, passed, elapsed, budget = _ACCEPTANCE[n]
        t = "n/a" if elapsed is None else f"{elapsed:.2f}s"
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {n:2d}  {title}  [{t}, budget {budget}s]")
