import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def naive_rank_mod2(rows):
    """Textbook elimination on lists of 0/1 lists; the reference for packed code."""
    a = [list(map(int, r)) for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] % 2), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] % 2:
                a[i] = [(x + y) % 2 for x, y in zip(a[i], a[r])]
        r += 1
    return r


# ---------------------------------------------------------------------------
# acceptance reporting: one PASS/FAIL line per criterion in the summary
# ---------------------------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    number, title = mark.args
    prev = _CRITERIA.get(number, (title, True, 0.0))
    ok = prev[1] and not rep.failed
    _CRITERIA[number] = (title, ok, prev[2] + (rep.duration if rep.when == "call" else 0.0))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, secs = _CRITERIA[number]
        terminalreporter.write_line(
            f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.2f} s)"
        )
