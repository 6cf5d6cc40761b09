"""Color change rule on the directed graph of a colored pattern matrix.

For a p x q matrix ``M`` (p <= q) the graph has vertices ``1..q`` and an edge
``i -> j`` whenever ``M[j, i]`` is nonzero, so only the row vertices
``1..p`` can have incoming edges.  A white set ``Y`` may be blackened by a
set ``X`` when ``Y`` is exactly the white out-neighborhood of ``X``,
``|X| = |Y|``, and the square submatrix ``M[Y, X]`` passes the
nonsingularity test.  The graph is colorable when some sequence of such
moves blackens every row vertex; colorability implies full row rank.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import BudgetExceeded, ColorCtrlError, DimensionError
from .matching import ColoredBipartiteGraph, Edge, NonsingularityCertificate, certify
from .pattern import ColorId, ColoredPatternMatrix

DEFAULT_SEARCH_BUDGET = 10**6


class InvalidTrace(ColorCtrlError):
    """A derivation trace failed to replay."""


@dataclass(frozen=True)
class DirectedEdge:
    source: int
    target: int
    color: ColorId

    @property
    def solid(self) -> bool:
        return self.color.is_star


@dataclass(frozen=True)
class ColoredDirectedGraph:
    vertex_count: int
    row_count: int
    edges: frozenset[DirectedEdge]
    _out: dict[int, dict[int, ColorId]] = field(
        default_factory=dict, compare=False, hash=False, repr=False
    )

    def __post_init__(self) -> None:
        out: dict[int, dict[int, ColorId]] = {v: {} for v in range(1, self.vertex_count + 1)}
        for e in self.edges:
            if not 1 <= e.target <= self.row_count:
                raise DimensionError(f"edge {e.source}->{e.target} targets a non-row vertex")
            out[e.source][e.target] = e.color
        object.__setattr__(self, "_out", out)

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def out_neighbors(self, v: int) -> dict[int, ColorId]:
        return self._out[v]

    def color(self, i: int, j: int) -> ColorId | None:
        return self._out[i].get(j)


def build_directed_graph(m: ColoredPatternMatrix) -> ColoredDirectedGraph:
    if m.rows > m.cols:
        raise DimensionError(f"need p <= q, got a {m.rows}x{m.cols} matrix")
    edges = frozenset(
        DirectedEdge(source=j + 1, target=i + 1, color=cell)
        for i, row in enumerate(m.entries)
        for j, cell in enumerate(row)
        if cell is not None
    )
    return ColoredDirectedGraph(m.cols, m.rows, edges)


@dataclass(frozen=True)
class ColorState:
    black: frozenset[int] = frozenset()

    def white_rows(self, g: ColoredDirectedGraph) -> frozenset[int]:
        return frozenset(range(1, g.row_count + 1)) - self.black


def _black(s: ColorState | Iterable[int] | None) -> frozenset[int]:
    if s is None:
        return frozenset()
    if isinstance(s, ColorState):
        return s.black
    return frozenset(s)


def white_out_neighbors(
    g: ColoredDirectedGraph, X: Iterable[int], s: ColorState | Iterable[int] | None = None
) -> frozenset[int]:
    black = _black(s)
    return frozenset(j for i in X for j in g.out_neighbors(i) if j not in black)


def induced_bipartite(g: ColoredDirectedGraph, X: Iterable[int], Y: Iterable[int]) -> ColoredBipartiteGraph:
    """Bipartite graph on sorted X (as x_1..) and sorted Y (as y_1..)."""
    xs, ys = sorted(X), sorted(Y)
    ypos = {y: b for b, y in enumerate(ys, start=1)}
    edges = frozenset(
        Edge(a, ypos[j], color)
        for a, i in enumerate(xs, start=1)
        for j, color in g.out_neighbors(i).items()
        if j in ypos
    )
    return ColoredBipartiteGraph(len(xs), edges)


def is_color_perfect_white_neighbor(
    g: ColoredDirectedGraph,
    X: Iterable[int],
    Y: Iterable[int],
    s: ColorState | Iterable[int] | None = None,
) -> tuple[bool, NonsingularityCertificate | None]:
    X, Y = frozenset(X), frozenset(Y)
    if not X or not Y or len(X) != len(Y):
        return False, None
    if white_out_neighbors(g, X, s) != Y:
        return False, None
    cert = certify(induced_bipartite(g, X, Y))
    return cert.verdict, cert


@dataclass(frozen=True)
class Step:
    X: tuple[int, ...]
    Y: tuple[int, ...]
    certificate: NonsingularityCertificate | None = None

    def to_json(self) -> dict:
        out: dict = {"X": list(self.X), "Y": list(self.Y)}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


@dataclass(frozen=True)
class DerivationTrace:
    steps: tuple[Step, ...]

    def pairs(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        return [(s.X, s.Y) for s in self.steps]

    def states(self) -> Iterator[tuple[frozenset[int], Step]]:
        """Yield (black set before the step, step) in order."""
        black: frozenset[int] = frozenset()
        for step in self.steps:
            yield black, step
            black = black | frozenset(step.Y)

    @property
    def derived_set(self) -> frozenset[int]:
        return frozenset(y for s in self.steps for y in s.Y)

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]


def replay_trace(
    g: ColoredDirectedGraph,
    steps: Iterable[Step | tuple[Iterable[int], Iterable[int]]],
) -> DerivationTrace:
    """Re-check every move from the all-white state; returns a certified trace."""
    black: frozenset[int] = frozenset()
    out = []
    for n, step in enumerate(steps, start=1):
        X, Y = (step.X, step.Y) if isinstance(step, Step) else step
        X, Y = tuple(sorted(X)), tuple(sorted(Y))
        if black & set(Y):
            raise InvalidTrace(f"step {n}: {Y} contains black vertices")
        ok, cert = is_color_perfect_white_neighbor(g, X, Y, black)
        if not ok:
            raise InvalidTrace(f"step {n}: {Y} is not a color-perfect white neighbor of {X}")
        out.append(Step(X, Y, cert))
        black |= set(Y)
    return DerivationTrace(tuple(out))


@dataclass(frozen=True)
class ColorabilityResult:
    """``colorable`` is None when a non-exhaustive search found no trace."""

    colorable: bool | None
    trace: DerivationTrace | None
    exhaustive: bool
    states_explored: int
    best_derived_set: frozenset[int] = frozenset()

    def to_json(self) -> dict:
        return {
            "colorable": self.colorable,
            "exhaustive": self.exhaustive,
            "states_explored": self.states_explored,
            "trace": None if self.trace is None else self.trace.to_json(),
            "best_derived_set": sorted(self.best_derived_set),
        }


class _Search:
    def __init__(self, g: ColoredDirectedGraph, budget: int, max_x: int | None) -> None:
        self.g = g
        self.rows = frozenset(range(1, g.row_count + 1))
        self.budget = budget
        self.max_x = g.row_count if max_x is None else max_x
        self.work = 0
        self.states = 0
        self.dead: set[frozenset[int]] = set()
        self.best: frozenset[int] = frozenset()
        self._verdicts: dict[tuple[tuple[int, ...], tuple[int, ...]], NonsingularityCertificate] = {}

    def _charge(self, n: int = 1) -> None:
        self.work += n
        if self.work > self.budget:
            raise BudgetExceeded(f"colorability search exceeded {self.budget} candidate sets")

    def moves(self, black: frozenset[int]) -> Iterator[Step]:
        """Valid moves, ordered by (Y, X) lexicographically."""
        white = self.rows - black
        active = [v for v in self.g.vertices if any(j in white for j in self.g.out_neighbors(v))]
        candidates = []
        for size in range(1, min(len(white), self.max_x, len(active)) + 1):
            for X in itertools.combinations(active, size):
                self._charge()
                Y = white_out_neighbors(self.g, X, black)
                if len(Y) == size:
                    candidates.append((tuple(sorted(Y)), X))
        candidates.sort()
        for Y, X in candidates:
            key = (X, Y)
            cert = self._verdicts.get(key)
            if cert is None:
                cert = certify(induced_bipartite(self.g, X, Y))
                self._verdicts[key] = cert
            if cert.verdict:
                yield Step(X, Y, cert)

    def exhaustive(self, black: frozenset[int]) -> list[Step] | None:
        if black == self.rows:
            return []
        if black in self.dead:
            return None
        self.states += 1
        if len(black) > len(self.best):
            self.best = black
        for step in self.moves(black):
            rest = self.exhaustive(black | frozenset(step.Y))
            if rest is not None:
                return [step, *rest]
        self.dead.add(black)
        return None

    def greedy(self) -> list[Step] | None:
        black: frozenset[int] = frozenset()
        steps = []
        while black != self.rows:
            self.states += 1
            step = next(self.moves(black), None)
            if step is None:
                self.best = black
                return None
            steps.append(step)
            black |= frozenset(step.Y)
        return steps


def is_colorable(
    m: ColoredPatternMatrix | ColoredDirectedGraph,
    budget: int = DEFAULT_SEARCH_BUDGET,
    greedy: bool = False,
    max_x: int | None = None,
) -> ColorabilityResult:
    """Decide colorability, returning a replayable trace on success.

    The exhaustive search memoizes dead black sets, so a ``False`` answer
    means no order of moves reaches all row vertices.  Moves are tried in
    lexicographic order of ``(Y, X)``, which makes traces reproducible.
    ``greedy=True`` commits to the first move at every state; its failures,
    like those of a search with ``max_x`` below the row count, carry no
    verdict (``colorable is None``).
    """
    g = m if isinstance(m, ColoredDirectedGraph) else build_directed_graph(m)
    search = _Search(g, budget, max_x)
    if greedy:
        steps = search.greedy()
    else:
        steps = search.exhaustive(frozenset())
    exhaustive = not greedy and search.max_x >= g.row_count
    if steps is None:
        return ColorabilityResult(
            False if exhaustive else None, None, exhaustive, search.states, search.best
        )
    trace = DerivationTrace(tuple(steps))
    replay_trace(g, trace.steps)
    return ColorabilityResult(True, trace, exhaustive, search.states, trace.derived_set)
