"""Colored pattern matrices, colored systems, and their exact realizations.

A colored pattern matrix is stored as a grid whose cells are either ``None``
(a fixed zero) or a :class:`ColorId`.  The coloring partition is implicit in
the grid: all cells carrying the same color id belong to the same class, so
the partition can never drift out of sync with the pattern.

Text documents look like::

    dims 2 3 2
    c1 c1 c2
    c1 0 c2

The optional third number on the header marks a system split: the first
``n`` columns form the state matrix, the rest the input matrix.
"""

from __future__ import annotations

import enum
import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Iterable, Mapping, Sequence

from .errors import AssignmentError, DimensionError, ParseError


class Kind(enum.Enum):
    STAR = "c"
    QUESTION = "g"


@total_ordering
@dataclass(frozen=True)
class ColorId:
    """A color symbol: ``c<r>`` for a nonzero class, ``g<s>`` for an arbitrary one."""

    kind: Kind
    index: int

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"color index must be >= 1, got {self.index}")

    @property
    def is_star(self) -> bool:
        return self.kind is Kind.STAR

    @property
    def token(self) -> str:
        return f"{self.kind.value}{self.index}"

    def _key(self) -> tuple[int, int]:
        return (0 if self.kind is Kind.STAR else 1, self.index)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, ColorId):
            return NotImplemented
        return self._key() < other._key()

    def __str__(self) -> str:
        return self.token

    def __repr__(self) -> str:
        return f"ColorId({self.token})"

    @classmethod
    def parse(cls, token: str) -> ColorId:
        match = _COLOR_RE.fullmatch(token)
        if match is None:
            raise ParseError(f"malformed color token {token!r}")
        return cls(Kind(match.group(1)), int(match.group(2)))


def star(index: int) -> ColorId:
    return ColorId(Kind.STAR, index)


def question(index: int) -> ColorId:
    return ColorId(Kind.QUESTION, index)


# Leading zeros are rejected so that every color has exactly one spelling.
_COLOR_RE = re.compile(r"([cg])([1-9][0-9]*)")

Cell = ColorId | None


def parse_token(token: str) -> Cell:
    if token == "0":
        return None
    return ColorId.parse(token)


def cell_token(cell: Cell) -> str:
    return "0" if cell is None else cell.token


@dataclass(frozen=True)
class ColoredPatternMatrix:
    """A p x q grid of zeros and colors.

    Construction checks that the grid is rectangular and nonempty.  Canonical
    color numbering (no gaps) is enforced by the parser and reported by
    :func:`validate`, but not required here: submatrices keep the colors of
    their parent so certificates can be read against the original input.
    """

    entries: tuple[tuple[Cell, ...], ...]

    def __post_init__(self) -> None:
        entries = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries or not entries[0]:
            raise DimensionError("pattern matrix must have at least one row and one column")
        width = len(entries[0])
        for i, row in enumerate(entries):
            if len(row) != width:
                raise DimensionError(f"row {i + 1} has {len(row)} entries, expected {width}")
            for cell in row:
                if cell is not None and not isinstance(cell, ColorId):
                    raise TypeError(f"cell must be ColorId or None, got {cell!r}")

    @classmethod
    def from_tokens(cls, rows: Iterable[Iterable[str]]) -> ColoredPatternMatrix:
        return cls(tuple(tuple(parse_token(t) for t in row) for row in rows))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Cell:
        i, j = ij
        return self.entries[i][j]

    def tokens(self) -> list[list[str]]:
        return [[cell_token(c) for c in row] for row in self.entries]

    @cached_property
    def classes(self) -> dict[ColorId, tuple[tuple[int, int], ...]]:
        """Color -> sorted 1-based locations; the partition of the nonzero cells."""
        found: dict[ColorId, list[tuple[int, int]]] = defaultdict(list)
        for i, row in enumerate(self.entries):
            for j, cell in enumerate(row):
                if cell is not None:
                    found[cell].append((i + 1, j + 1))
        return {color: tuple(found[color]) for color in sorted(found)}

    @property
    def colors(self) -> tuple[ColorId, ...]:
        return tuple(self.classes)

    @property
    def star_colors(self) -> tuple[ColorId, ...]:
        return tuple(c for c in self.classes if c.is_star)

    @property
    def question_colors(self) -> tuple[ColorId, ...]:
        return tuple(c for c in self.classes if not c.is_star)

    @property
    def k(self) -> int:
        return len(self.star_colors)

    @property
    def l(self) -> int:  # noqa: E743 - conventional name for the ?-class count
        return len(self.question_colors)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> ColoredPatternMatrix:
        """Rows/cols are 0-based; the coloring is restricted to the selected cells."""
        return ColoredPatternMatrix(tuple(tuple(self.entries[i][j] for j in cols) for i in rows))

    def with_entries(self, changes: Mapping[tuple[int, int], Cell]) -> ColoredPatternMatrix:
        grid = [list(row) for row in self.entries]
        for (i, j), cell in changes.items():
            grid[i][j] = cell
        return ColoredPatternMatrix(tuple(tuple(r) for r in grid))

    def renumbered(self) -> tuple[ColoredPatternMatrix, dict[ColorId, ColorId]]:
        """Canonical renumbering, preserving relative order within each kind."""
        mapping: dict[ColorId, ColorId] = {}
        for kind in Kind:
            used = sorted(c for c in self.classes if c.kind is kind)
            for new_index, color in enumerate(used, start=1):
                mapping[color] = ColorId(kind, new_index)
        grid = tuple(
            tuple(None if c is None else mapping[c] for c in row) for row in self.entries
        )
        return ColoredPatternMatrix(grid), mapping

    def to_text(self, state_dim: int | None = None) -> str:
        header = f"dims {self.rows} {self.cols}"
        if state_dim is not None:
            header += f" {state_dim}"
        body = "\n".join(" ".join(row) for row in self.tokens())
        return f"{header}\n{body}\n"

    def to_json(self, state_dim: int | None = None) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "state_dim": state_dim,
            "entries": self.tokens(),
        }

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{t:>3}" for t in row) for row in self.tokens())


@dataclass(frozen=True)
class ColoredSystem:
    """A colored structured system: ``[A B]`` with ``A`` the first ``n`` columns."""

    state_dim: int
    matrix: ColoredPatternMatrix

    def __post_init__(self) -> None:
        n = self.state_dim
        if n < 1:
            raise DimensionError("state dimension must be >= 1")
        if self.matrix.rows != n:
            raise DimensionError(f"system matrix has {self.matrix.rows} rows, expected n={n}")
        if self.matrix.cols <= n:
            raise DimensionError("system needs at least one input column (m >= 1)")

    @property
    def n(self) -> int:
        return self.state_dim

    @property
    def m(self) -> int:
        return self.matrix.cols - self.state_dim

    @property
    def A(self) -> ColoredPatternMatrix:
        return self.matrix.submatrix(range(self.n), range(self.n))

    @property
    def B(self) -> ColoredPatternMatrix:
        return self.matrix.submatrix(range(self.n), range(self.n, self.matrix.cols))

    @classmethod
    def from_blocks(cls, A: ColoredPatternMatrix, B: ColoredPatternMatrix) -> ColoredSystem:
        if A.rows != A.cols or B.rows != A.rows:
            raise DimensionError("A must be n x n and B must be n x m")
        grid = tuple(a + b for a, b in zip(A.entries, B.entries))
        return cls(A.rows, ColoredPatternMatrix(grid))

    def to_text(self) -> str:
        return self.matrix.to_text(self.state_dim)


# --------------------------------------------------------------------------- #
# parsing and validation


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    cell: tuple[int, int] | None = None  # 1-based

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message, "cell": self.cell}


def _gap_diagnostics(cells: Mapping[tuple[int, int], ColorId]) -> list[Diagnostic]:
    diags = []
    for kind in Kind:
        used = sorted({c.index for c in cells.values() if c.kind is kind})
        if used and used != list(range(1, len(used) + 1)):
            missing = sorted(set(range(1, used[-1] + 1)) - set(used))
            suggestion = {
                f"{kind.value}{old}": f"{kind.value}{new}"
                for new, old in enumerate(used, start=1)
                if old != new
            }
            first_bad = min(i for i in used if i > missing[0])
            cell = min(loc for loc, c in cells.items() if c == ColorId(kind, first_bad))
            names = ", ".join(f"{kind.value}{i}" for i in missing)
            hint = ", ".join(f"{a}->{b}" for a, b in suggestion.items())
            diags.append(
                Diagnostic(
                    "gapped-index",
                    f"{kind.value}-colors are not numbered 1..{len(used)}: missing {names}; "
                    f"renumber {hint}",
                    cell,
                )
            )
    return diags


def validate(m: ColoredPatternMatrix | Sequence[Sequence[str]]) -> list[Diagnostic]:
    """Check a matrix (or raw token grid) against the pattern invariants.

    An empty list means the input is a valid, canonically numbered colored
    pattern matrix.
    """
    if isinstance(m, ColoredPatternMatrix):
        grid = m.tokens()
    else:
        grid = [list(row) for row in m]
    diags: list[Diagnostic] = []
    if not grid or not grid[0]:
        return [Diagnostic("empty", "matrix must have at least one row and one column")]
    width = len(grid[0])
    cells: dict[tuple[int, int], ColorId] = {}
    for i, row in enumerate(grid, start=1):
        if len(row) != width:
            diags.append(
                Diagnostic(
                    "ragged-row",
                    f"row {i} has {len(row)} entries, expected {width}",
                    (i, min(len(row), width) + 1),
                )
            )
        for j, tok in enumerate(row, start=1):
            try:
                cell = parse_token(tok)
            except ParseError:
                diags.append(
                    Diagnostic("malformed-token", f"token {tok!r} is not 0, c<r> or g<s>", (i, j))
                )
                continue
            if cell is not None:
                cells[(i, j)] = cell
    diags.extend(_gap_diagnostics(cells))
    return diags


@dataclass(frozen=True)
class Document:
    matrix: ColoredPatternMatrix
    state_dim: int | None = None

    def system(self, n: int | None = None) -> ColoredSystem:
        n = self.state_dim if n is None else n
        if n is None:
            raise ParseError("no state dimension: pass n or add it to the dims header")
        return ColoredSystem(n, self.matrix)

    def to_text(self) -> str:
        return self.matrix.to_text(self.state_dim)


def _check_grid(grid: list[list[str]], state_dim: int | None) -> Document:
    diags = validate(grid)
    if diags:
        raise ParseError("; ".join(d.message + (f" at {d.cell}" if d.cell else "") for d in diags))
    m = ColoredPatternMatrix.from_tokens(grid)
    if state_dim is not None:
        if state_dim < 1:
            raise ParseError("state dimension n must be >= 1")
        if state_dim != m.rows:
            raise ParseError(f"state dimension n={state_dim} must equal the row count {m.rows}")
        if state_dim >= m.cols:
            raise ParseError("system split leaves no input columns (m = 0)")
    return Document(m, state_dim)


def read_raw(text: str) -> tuple[list[list[str]], int | None]:
    """Split a document into its token grid and optional state dimension.

    Only the header and row count are checked here; cell-level problems are
    left to :func:`validate`.
    """
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
            p, q, entries = data["rows"], data["cols"], data["entries"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"bad JSON envelope: {exc}") from exc
        grid = [[str(t) for t in row] for row in entries]
        state_dim = data.get("state_dim")
    else:
        lines = [ln.split() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln[0].startswith("#")]
        if not lines or lines[0][0] != "dims":
            raise ParseError("document must start with a 'dims p q [n]' header")
        header = lines[0][1:]
        if len(header) not in (2, 3) or not all(h.isdigit() for h in header):
            raise ParseError(f"bad header {' '.join(lines[0])!r}")
        p, q = int(header[0]), int(header[1])
        state_dim = int(header[2]) if len(header) == 3 else None
        grid = lines[1:]
    if not isinstance(p, int) or not isinstance(q, int) or p < 1 or q < 1:
        raise ParseError("dims must be positive integers")
    if len(grid) != p:
        raise ParseError(f"expected {p} rows, found {len(grid)}")
    if grid and all(len(row) == len(grid[0]) for row in grid) and len(grid[0]) != q:
        raise ParseError(f"rows have {len(grid[0])} entries, header declares {q}")
    return grid, state_dim


def parse_document(text: str) -> Document:
    """Parse the text format or its JSON envelope."""
    grid, state_dim = read_raw(text)
    return _check_grid(grid, state_dim)


def parse_colored_matrix(text: str) -> ColoredPatternMatrix:
    return parse_document(text).matrix


def parse_system(text: str, n: int | None = None) -> ColoredSystem:
    return parse_document(text).system(n)


# --------------------------------------------------------------------------- #
# barred system


@dataclass(frozen=True)
class BarredSystem:
    system: ColoredSystem
    renumbering: dict[str, str | None]  # pre-renumbering label -> final label (None if dropped)

    def to_json(self) -> dict:
        return {
            "matrix": self.system.matrix.to_json(self.system.state_dim),
            "renumbering": self.renumbering,
        }


def build_barred_with_map(sys: ColoredSystem) -> BarredSystem:
    """Diagonal rewrite of ``A`` with fresh singleton diagonal classes.

    Diagonal zeros become fresh star colors ``c_{k+1}, ...`` and every other
    diagonal entry a fresh ``g_{l+1}, ...``, both in increasing diagonal
    order.  Old classes lose their diagonal members; classes left empty are
    dropped and the survivors renumbered canonically.
    """
    m = sys.matrix
    k = max((c.index for c in m.star_colors), default=0)
    l = max((c.index for c in m.question_colors), default=0)
    changes: dict[tuple[int, int], Cell] = {}
    fresh_star = fresh_q = 0
    for i in range(sys.n):
        if m[i, i] is None:
            fresh_star += 1
            changes[(i, i)] = star(k + fresh_star)
        else:
            fresh_q += 1
            changes[(i, i)] = question(l + fresh_q)
    raw = m.with_entries(changes)
    canon, mapping = raw.renumbered()
    labels = [star(r) for r in range(1, k + fresh_star + 1)]
    labels += [question(s) for s in range(1, l + fresh_q + 1)]
    renumbering = {c.token: (mapping[c].token if c in mapping else None) for c in labels}
    return BarredSystem(ColoredSystem(sys.n, canon), renumbering)


def build_barred(sys: ColoredSystem) -> ColoredSystem:
    return build_barred_with_map(sys).system


# --------------------------------------------------------------------------- #
# realizations


@dataclass(frozen=True)
class ColorAssignment:
    values: Mapping[ColorId, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", {c: Fraction(v) for c, v in sorted(self.values.items())}
        )

    def __getitem__(self, color: ColorId) -> Fraction:
        return self.values[color]

    def check(self, colors: Iterable[ColorId]) -> None:
        for color in colors:
            if color not in self.values:
                raise AssignmentError(f"assignment has no value for {color}")
            if color.is_star and self.values[color] == 0:
                raise AssignmentError(f"star color {color} must be nonzero")

    def to_json(self) -> dict[str, str]:
        return {c.token: str(v) for c, v in self.values.items()}

    @classmethod
    def from_tokens(cls, values: Mapping[str, object]) -> ColorAssignment:
        return cls({ColorId.parse(k): Fraction(str(v)) for k, v in values.items()})


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix of exact rationals."""

    data: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        data = tuple(tuple(Fraction(x) for x in row) for row in self.data)
        if data and any(len(r) != len(data[0]) for r in data):
            raise DimensionError("ragged rational matrix")
        object.__setattr__(self, "data", data)

    @classmethod
    def of(cls, rows: Iterable[Iterable[object]]) -> RationalMatrix:
        return cls(tuple(tuple(Fraction(x) for x in r) for r in rows))

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0]) if self.data else 0

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self.data[ij[0]][ij[1]]

    def columns(self, cols: Sequence[int]) -> RationalMatrix:
        return RationalMatrix(tuple(tuple(r[j] for j in cols) for r in self.data))

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.data]


def instantiate(m: ColoredPatternMatrix, a: ColorAssignment) -> RationalMatrix:
    """Substitute color values into the pattern; zeros stay zero."""
    a.check(m.colors)
    return RationalMatrix(
        tuple(tuple(Fraction(0) if c is None else a[c] for c in row) for row in m.entries)
    )
