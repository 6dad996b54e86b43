import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from loopnil import corpus
from loopnil.constructions import central_extension
from loopnil.loop import Loop

DATA = Path(__file__).parent / "data"


def random_loop_table(n: int, rng: random.Random) -> list[list[int]]:
    """A reduced Latin square (row 0 and column 0 are 0..n-1), filled by randomized backtracking."""
    t = [[None] * n for _ in range(n)]
    for i in range(n):
        t[0][i] = i
        t[i][0] = i
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]

    def ok(i, j, v):
        return all(t[i][c] != v for c in range(n)) and all(t[r][j] != v for r in range(n))

    def fill(pos):
        if pos == len(cells):
            return True
        i, j = cells[pos]
        vals = list(range(n))
        rng.shuffle(vals)
        for v in vals:
            if ok(i, j, v):
                t[i][j] = v
                if fill(pos + 1):
                    return True
                t[i][j] = None
        return False

    assert fill(0)
    return t


@st.composite
def loops(draw, min_order=1, max_order=6):
    n = draw(st.integers(min_order, max_order))
    seed = draw(st.integers(0, 2**32 - 1))
    return Loop(random_loop_table(n, random.Random(seed)))


def cocycle_from_bits(bits):
    return lambda x, y: 0 if x == 0 or y == 0 else bits[(x - 1) * 3 + (y - 1)]


@st.composite
def central_extensions(draw):
    bits = draw(st.lists(st.integers(0, 1), min_size=9, max_size=9))
    return central_extension(cocycle_from_bits(bits))


@pytest.fixture(scope="session")
def ex6():
    return corpus.load("ex6")


@pytest.fixture(scope="session")
def small_corpus():
    return corpus.builtin(max_order=8)


@pytest.fixture(scope="session")
def order8_tables():
    from loopnil.loop import parse_many

    return parse_many((DATA / "order8_clm3.tbl").read_text())


# acceptance summary: one line per criterion

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "seconds": 0.0, "ran": False})
    if rep.when == "call":
        entry["ran"] = True
        entry["seconds"] += rep.duration
    if rep.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        status = "PASS" if e["ok"] and e["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {status}  {e['title']}  ({e['seconds']:.1f} s)")
