from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from colorctrl.pattern import (
    ColoredPatternMatrix,
    ColoredSystem,
    ColorId,
    Kind,
    parse_document,
)

DATA = Path(__file__).resolve().parent.parent / "data"

EX1_TEXT = """dims 5 7 5
0 0 c1 0 0 c1 0
0 g2 0 c2 g1 c2 c1
c1 0 g2 0 0 0 0
g1 g1 c1 c1 0 0 0
c2 c2 0 0 0 0 0
"""

# barred version as printed in the worked example, before dropping the empty
# g2 class: fresh c3=(1,1), c4=(5,5), g3=(2,2), g4=(3,3), g5=(4,4)
EX1_BARRED_PAPER = [
    ["c3", "0", "c1", "0", "0", "c1", "0"],
    ["0", "g3", "0", "c2", "g1", "c2", "c1"],
    ["c1", "0", "g4", "0", "0", "0", "0"],
    ["g1", "g1", "c1", "g5", "0", "0", "0"],
    ["c2", "c2", "0", "0", "c4", "0", "0"],
]

EX4 = [["c1", "c1", "c2"], ["c1", "0", "c2"]]
EX5 = [["c1", "0", "g2"], ["g1", "g1", "c1"], ["c2", "c2", "0"]]
EX9 = [["c1", "c2", "c3", "0"], ["0", "c2", "0", "c2"], ["c1", "0", "c2", "c3"]]


def cpm(rows) -> ColoredPatternMatrix:
    return ColoredPatternMatrix.from_tokens(rows)


@pytest.fixture
def ex1_system() -> ColoredSystem:
    return parse_document(EX1_TEXT).system()


@pytest.fixture
def ex1() -> ColoredPatternMatrix:
    return parse_document(EX1_TEXT).matrix


@pytest.fixture
def ex4_system() -> ColoredSystem:
    return ColoredSystem(2, cpm(EX4))


@pytest.fixture
def ex5() -> ColoredPatternMatrix:
    return cpm(EX5)


@pytest.fixture
def ex9() -> ColoredPatternMatrix:
    return cpm(EX9)


def random_pattern(
    rng: random.Random, rows: int, cols: int, density: float, max_colors: int = 4
) -> ColoredPatternMatrix:
    """Random colored pattern with at most ``max_colors`` classes, canonically numbered."""
    k = rng.randint(0, max_colors)
    l = rng.randint(0, max_colors - k)
    if k + l == 0:
        k = 1
    palette = [ColorId(Kind.STAR, r) for r in range(1, k + 1)]
    palette += [ColorId(Kind.QUESTION, s) for s in range(1, l + 1)]
    grid = tuple(
        tuple(rng.choice(palette) if rng.random() < density else None for _ in range(cols))
        for _ in range(rows)
    )
    return ColoredPatternMatrix(grid).renumbered()[0]


def random_system(rng: random.Random, n: int, m: int, density: float, max_colors: int = 6) -> ColoredSystem:
    return ColoredSystem(n, random_pattern(rng, n, n + m, density, max_colors))


@st.composite
def patterns(draw, min_rows=1, max_rows=4, square=False, wide=False, max_colors=4):
    """Hypothesis strategy for canonical colored pattern matrices."""
    p = draw(st.integers(min_rows, max_rows))
    if square:
        q = p
    elif wide:
        q = draw(st.integers(p, max_rows + 2))
    else:
        q = draw(st.integers(1, max_rows + 2))
    k = draw(st.integers(0, max_colors))
    l = draw(st.integers(0, max_colors - k))
    palette = [None] + [ColorId(Kind.STAR, r) for r in range(1, k + 1)]
    palette += [ColorId(Kind.QUESTION, s) for s in range(1, l + 1)]
    cells = draw(st.lists(st.sampled_from(palette), min_size=p * q, max_size=p * q))
    grid = tuple(tuple(cells[i * q:(i + 1) * q]) for i in range(p))
    return ColoredPatternMatrix(grid).renumbered()[0]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
