"""Grid maps and benchmark scenarios in the MovingAI file formats.

Cells are (row, col) tuples at the API surface; solvers work on flat cell
indices (row * width + col) for speed, via :meth:`GridMap.index` /
:meth:`GridMap.cell`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Cell = tuple[int, int]

# Fixed base order of moves: stay, up, right, down, left.
MOVES: tuple[Cell, ...] = ((0, 0), (-1, 0), (0, 1), (1, 0), (0, -1))

PASSABLE_CHARS = frozenset(".G")


class MapFormatError(ValueError):
    """Raised on malformed .map/.scen input; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class ScenarioEntry:
    """One start/goal pair from a .scen file.

    ``reference_distance`` is the file's optimal-distance column; it is
    informational only and never used by the solvers.
    """

    start: Cell
    goal: Cell
    reference_distance: float


class GridMap:
    """A 4-connected passability grid.

    Immutable after construction; safe to share across solver instances.
    """

    def __init__(self, passable: np.ndarray):
        passable = np.asarray(passable, dtype=bool)
        if passable.ndim != 2 or passable.shape[0] < 1 or passable.shape[1] < 1:
            raise ValueError("passable must be a non-empty 2-D boolean array")
        self.passable = passable
        self.passable.setflags(write=False)
        self.height, self.width = passable.shape
        self.num_cells = self.height * self.width
        self._passable_flat: list[bool] = passable.ravel().tolist()
        self._neighbor_table: list[list[int]] | None = None
        self._csgraph = None

    def index(self, cell: Cell) -> int:
        r, c = cell
        if not (0 <= r < self.height and 0 <= c < self.width):
            raise ValueError(f"cell {cell} out of bounds for {self.height}x{self.width} map")
        return r * self.width + c

    def cell(self, idx: int) -> Cell:
        return divmod(idx, self.width)

    def is_passable(self, cell: Cell) -> bool:
        r, c = cell
        return 0 <= r < self.height and 0 <= c < self.width and bool(self.passable[r, c])

    def neighbors(self, cell: Cell) -> list[Cell]:
        """Stay plus passable 4-connected cells, in base order (stay, U, R, D, L)."""
        if not self.is_passable(cell):
            raise ValueError(f"cell {cell} is not passable")
        r, c = cell
        return [
            (r + dr, c + dc)
            for dr, dc in MOVES
            if self.is_passable((r + dr, c + dc))
        ]

    @property
    def neighbor_table(self) -> list[list[int]]:
        """Flat-index neighbor lists for every cell (empty for blocked cells)."""
        if self._neighbor_table is None:
            table: list[list[int]] = []
            for idx in range(self.num_cells):
                if self._passable_flat[idx]:
                    table.append([self.index(n) for n in self.neighbors(self.cell(idx))])
                else:
                    table.append([])
            self._neighbor_table = table
        return self._neighbor_table

    @property
    def csgraph(self):
        """CSR adjacency over flat cell indices (unit edges, both directions)."""
        if self._csgraph is None:
            from scipy.sparse import csr_matrix

            idx = np.arange(self.num_cells).reshape(self.height, self.width)
            p = self.passable
            pairs = []
            right = p[:, :-1] & p[:, 1:]
            pairs.append((idx[:, :-1][right], idx[:, 1:][right]))
            down = p[:-1, :] & p[1:, :]
            pairs.append((idx[:-1, :][down], idx[1:, :][down]))
            u = np.concatenate([a for a, _ in pairs] + [b for _, b in pairs])
            v = np.concatenate([b for _, b in pairs] + [a for a, _ in pairs])
            data = np.ones(len(u), dtype=np.int8)
            self._csgraph = csr_matrix(
                (data, (u, v)), shape=(self.num_cells, self.num_cells)
            )
        return self._csgraph

    def to_text(self) -> str:
        """Re-serialize in .map format ('.' passable, '@' blocked)."""
        rows = [
            "".join("." if self.passable[r, c] else "@" for c in range(self.width))
            for r in range(self.height)
        ]
        return "\n".join(
            ["type octile", f"height {self.height}", f"width {self.width}", "map", *rows]
        ) + "\n"


def parse_map(text: str) -> GridMap:
    """Parse a MovingAI .map file.

    '.' and 'G' are passable; every other terrain character is blocked.
    """
    lines = text.splitlines()
    header = [
        ("type", None),
        ("height", int),
        ("width", int),
        ("map", None),
    ]
    values: dict[str, int] = {}
    for lineno, (key, conv) in enumerate(header, start=1):
        if lineno - 1 >= len(lines):
            raise MapFormatError(lineno, f"missing header line '{key}'")
        tokens = lines[lineno - 1].split()
        if not tokens or tokens[0] != key:
            raise MapFormatError(lineno, f"expected header line '{key}', got {lines[lineno - 1]!r}")
        if conv is not None:
            if len(tokens) != 2:
                raise MapFormatError(lineno, f"expected '{key} <int>'")
            try:
                values[key] = conv(tokens[1])
            except ValueError:
                raise MapFormatError(lineno, f"non-integer {key}: {tokens[1]!r}") from None
    height, width = values["height"], values["width"]
    if height < 1 or width < 1:
        raise MapFormatError(2, "height and width must be positive")

    grid = np.zeros((height, width), dtype=bool)
    row = 0
    for lineno in range(5, len(lines) + 1):
        raw = lines[lineno - 1].rstrip()
        if not raw:
            continue
        if row >= height:
            raise MapFormatError(lineno, f"more than {height} map rows")
        if len(raw) != width:
            raise MapFormatError(lineno, f"row has {len(raw)} cells, expected {width}")
        grid[row] = [ch in PASSABLE_CHARS for ch in raw]
        row += 1
    if row < height:
        raise MapFormatError(len(lines) + 1, f"only {row} map rows, expected {height}")
    return GridMap(grid)


def parse_scenario(text: str, grid: GridMap) -> list[ScenarioEntry]:
    """Parse a MovingAI .scen file against ``grid``.

    Scenario coordinates are (x, y) = (col, row); entries come back in file
    order as (row, col) cells.
    """
    lines = text.splitlines()
    if not lines or not lines[0].strip().startswith("version"):
        raise MapFormatError(1, "expected 'version 1' header")
    entries: list[ScenarioEntry] = []
    for lineno in range(2, len(lines) + 1):
        raw = lines[lineno - 1].rstrip("\n")
        if not raw.strip():
            continue
        fields = raw.split("\t")
        if len(fields) != 9:
            raise MapFormatError(lineno, f"expected 9 tab-separated fields, got {len(fields)}")
        try:
            width, height = int(fields[2]), int(fields[3])
            sx, sy, gx, gy = (int(f) for f in fields[4:8])
            dist = float(fields[8])
        except ValueError:
            raise MapFormatError(lineno, f"non-numeric field in {raw!r}") from None
        if (width, height) != (grid.width, grid.height):
            raise MapFormatError(
                lineno, f"scenario is for a {width}x{height} map, grid is {grid.width}x{grid.height}"
            )
        start, goal = (sy, sx), (gy, gx)
        if not grid.is_passable(start):
            raise MapFormatError(lineno, f"start {start} is not passable")
        if not grid.is_passable(goal):
            raise MapFormatError(lineno, f"goal {goal} is not passable")
        entries.append(ScenarioEntry(start=start, goal=goal, reference_distance=dist))
    return entries
