"""Perfect matchings of colored bipartite graphs and the nonsingularity test.

For a square colored pattern matrix ``N`` the bipartite graph has column
vertices ``x_1..x_t`` and row vertices ``y_1..y_t``, with an edge
``{x_i, y_j}`` whenever ``N[j, i]`` is nonzero.  A perfect matching is a
permutation ``gamma`` with edges ``{x_i, y_gamma(i)}``.  Matchings are grouped
by spectrum (the multiset of their edge colors); the matrix is nonsingular
for every admissible (complex) value of its colors exactly when

1. some perfect matching exists,
2. exactly one spectrum class has a nonzero signed count, and
3. that class uses star (nonzero) colors only.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import BudgetExceeded, DimensionError
from .pattern import ColorId, ColoredPatternMatrix

DEFAULT_MATCHING_BUDGET = 10**6


@dataclass(frozen=True)
class Edge:
    x: int  # column, 1-based
    y: int  # row, 1-based
    color: ColorId

    @property
    def solid(self) -> bool:
        return self.color.is_star


@dataclass(frozen=True)
class ColoredBipartiteGraph:
    size: int
    edges: frozenset[Edge]

    def color(self, x: int, y: int) -> ColorId | None:
        return self._lookup.get((x, y))

    @cached_property
    def _lookup(self) -> dict[tuple[int, int], ColorId]:
        return {(e.x, e.y): e.color for e in self.edges}

    def neighbors(self, x: int) -> list[int]:
        return sorted(e.y for e in self.edges if e.x == x)

    def biadjacency(self) -> list[list[int]]:
        """0/1 matrix indexed [x-1][y-1]."""
        out = [[0] * self.size for _ in range(self.size)]
        for e in self.edges:
            out[e.x - 1][e.y - 1] = 1
        return out


def build_bipartite(m: ColoredPatternMatrix) -> ColoredBipartiteGraph:
    if not m.is_square:
        raise DimensionError(f"bipartite graph needs a square matrix, got {m.rows}x{m.cols}")
    edges = frozenset(
        Edge(x=j + 1, y=i + 1, color=cell)
        for i, row in enumerate(m.entries)
        for j, cell in enumerate(row)
        if cell is not None
    )
    return ColoredBipartiteGraph(m.rows, edges)


def permutation_sign(gamma: Sequence[int]) -> int:
    """Parity of a 1-based permutation via its cycle decomposition."""
    n = len(gamma)
    seen = [False] * n
    transpositions = 0
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = gamma[i] - 1
            length += 1
        transpositions += length - 1
    return -1 if transpositions % 2 else 1


@dataclass(frozen=True)
class PerfectMatching:
    gamma: tuple[int, ...]  # gamma[i-1] = row matched to column x_i
    sign: int

    def edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x, y in enumerate(self.gamma, start=1)]


def enumerate_perfect_matchings(
    g: ColoredBipartiteGraph, budget: int = DEFAULT_MATCHING_BUDGET
) -> list[PerfectMatching]:
    """All perfect matchings, columns assigned in order and rows tried ascending."""
    t = g.size
    adj = [g.neighbors(x) for x in range(1, t + 1)]
    if any(not a for a in adj):
        return []
    row_cols: dict[int, list[int]] = defaultdict(list)
    for x, ys in enumerate(adj):
        for y in ys:
            row_cols[y].append(x)
    if len(row_cols) < t:
        return []

    found: list[PerfectMatching] = []
    gamma = [0] * t
    used = [False] * (t + 1)

    def feasible(next_x: int) -> bool:
        # every unmatched row still needs an unassigned column, and vice versa
        for y in range(1, t + 1):
            if not used[y] and not any(x >= next_x for x in row_cols[y]):
                return False
        for x in range(next_x, t):
            if not any(not used[y] for y in adj[x]):
                return False
        return True

    def extend(x: int) -> None:
        if x == t:
            if len(found) >= budget:
                raise BudgetExceeded(f"more than {budget} perfect matchings")
            found.append(PerfectMatching(tuple(gamma), permutation_sign(gamma)))
            return
        for y in adj[x]:
            if used[y]:
                continue
            used[y] = True
            gamma[x] = y
            if feasible(x + 1):
                extend(x + 1)
            used[y] = False

    extend(0)
    return found


Spectrum = tuple[ColorId, ...]


def spectrum_of(p: PerfectMatching, g: ColoredBipartiteGraph) -> Spectrum:
    return tuple(sorted(g.color(x, y) for x, y in p.edges()))


def spectrum_tokens(spec: Spectrum) -> list[str]:
    return [c.token for c in spec]


@dataclass(frozen=True)
class EquivalenceClass:
    spectrum: Spectrum
    members: tuple[PerfectMatching, ...]
    signature: int

    @property
    def all_solid(self) -> bool:
        return all(c.is_star for c in self.spectrum)

    def summary(self) -> dict:
        return {
            "spectrum": spectrum_tokens(self.spectrum),
            "signature": self.signature,
            "members": len(self.members),
        }


def group_equivalence_classes(
    ms: Sequence[PerfectMatching], g: ColoredBipartiteGraph
) -> list[EquivalenceClass]:
    groups: dict[Spectrum, list[PerfectMatching]] = defaultdict(list)
    for p in ms:
        groups[spectrum_of(p, g)].append(p)
    return [
        EquivalenceClass(spec, tuple(members), sum(p.sign for p in members))
        for spec, members in sorted(groups.items())
    ]


@dataclass(frozen=True)
class NonsingularityCertificate:
    verdict: bool
    classes: tuple[EquivalenceClass, ...]
    witness: EquivalenceClass | None = None
    failed_condition: int | None = None
    exhibit: tuple = ()

    def to_json(self) -> dict:
        out: dict = {
            "verdict": self.verdict,
            "classes": [c.summary() for c in self.classes],
        }
        if self.verdict:
            out["witness"] = self.witness.summary()
        else:
            out["failed_condition"] = self.failed_condition
            out["exhibit"] = list(self.exhibit)
        return out


def certify(g: ColoredBipartiteGraph, budget: int = DEFAULT_MATCHING_BUDGET) -> NonsingularityCertificate:
    classes = tuple(group_equivalence_classes(enumerate_perfect_matchings(g, budget), g))
    if not classes:
        return NonsingularityCertificate(False, classes, failed_condition=1)
    nonzero = [c for c in classes if c.signature != 0]
    if len(nonzero) != 1:
        exhibit = tuple(c.summary() for c in nonzero)
        return NonsingularityCertificate(False, classes, failed_condition=2, exhibit=exhibit)
    (only,) = nonzero
    if not only.all_solid:
        dashed = tuple(sorted({c.token for c in only.spectrum if not c.is_star}))
        return NonsingularityCertificate(False, classes, failed_condition=3, exhibit=dashed)
    return NonsingularityCertificate(True, classes, witness=only)


def is_nonsingular(
    m: ColoredPatternMatrix, budget: int = DEFAULT_MATCHING_BUDGET
) -> NonsingularityCertificate:
    return certify(build_bipartite(m), budget)
