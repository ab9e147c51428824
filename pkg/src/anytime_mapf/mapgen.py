"""Deterministic benchmark synthesis in the MovingAI formats.

The real benchmark archives are not redistributable here, so the pipeline
ships generators for the two map classes the experiments need: uniform random
obstacle maps (random-32-32-20 style) and cellular-automaton cave maps
(den520d scale and character). Scenario files carry exact BFS distances.
"""
from __future__ import annotations

import random

import numpy as np

from .grid import GridMap, ScenarioEntry
from .heuristics import UNREACHABLE, _distance_rows

_CROSS = [[0, 1, 0], [1, 1, 1], [0, 1, 0]]


def random_grid(
    width: int, height: int, density: float, seed: int, ensure_cycles: bool = False
) -> GridMap:
    """Uniform random obstacles at the given density.

    ``ensure_cycles=True`` repairs the open space until every open cell has at
    least two open neighbors and no edge is a bridge (biconnected caverns, the
    regime PIBT's progress guarantee assumes); obstacles are removed, so start
    from a slightly higher density to land on the target. The repair keeps the
    obstacle layout otherwise iid-random.
    """
    rng = np.random.default_rng(seed)
    walls = rng.random((height, width)) < density
    if ensure_cycles:
        _open_dead_ends(walls)
        _open_bridges(walls)
    return GridMap(~walls)


def _open_dead_ends(walls: np.ndarray) -> None:
    """Remove walls until no open cell has fewer than two open neighbors."""
    height, width = walls.shape
    for _ in range(100):
        opened = ~walls
        deg = np.zeros_like(walls, dtype=np.int8)
        deg[:-1, :] += opened[1:, :]
        deg[1:, :] += opened[:-1, :]
        deg[:, :-1] += opened[:, 1:]
        deg[:, 1:] += opened[:, :-1]
        dead = opened & (deg <= 1)
        if not dead.any():
            return
        for r, c in zip(*np.nonzero(dead)):
            best, score = None, -1
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < height and 0 <= cc < width and walls[rr, cc]:
                    if deg[rr, cc] > score:
                        best, score = (rr, cc), deg[rr, cc]
            if best is not None:
                walls[best] = False


def _open_bridges(walls: np.ndarray) -> None:
    """Open parallel cells next to bridge edges until the open space has none."""
    import networkx as nx

    height, width = walls.shape
    for _ in range(25):
        opened = ~walls
        graph = nx.Graph()
        for r in range(height):
            for c in range(width):
                if not opened[r, c]:
                    continue
                if r + 1 < height and opened[r + 1, c]:
                    graph.add_edge((r, c), (r + 1, c))
                if c + 1 < width and opened[r, c + 1]:
                    graph.add_edge((r, c), (r, c + 1))
        bridges = list(nx.bridges(graph))
        if not bridges:
            return
        changed = False
        for (r1, c1), (r2, c2) in bridges:
            if r1 == r2:
                candidates = [((r1 - 1, c1), (r1 - 1, c2)), ((r1 + 1, c1), (r1 + 1, c2))]
            else:
                candidates = [((r1, c1 - 1), (r2, c2 - 1)), ((r1, c1 + 1), (r2, c2 + 1))]
            for pair in candidates:
                if all(0 <= r < height and 0 <= c < width for r, c in pair):
                    for cell in pair:
                        if walls[cell]:
                            walls[cell] = False
                            changed = True
                    break
        _open_dead_ends(walls)
        if not changed:
            return


def cave_grid(
    width: int,
    height: int,
    seed: int,
    wall_p: float = 0.48,
    iterations: int = 3,
    erode: int = 2,
) -> GridMap:
    """Organic cave map: cellular-automaton smoothing plus wall erosion.

    Each erosion pass shaves one ring off every wall blob, widening all
    passages; with two passes shortest paths stay redundant almost everywhere,
    which is what keeps goal-resting agents from uniquely blocking doorways
    (the den520d-style regime). The defaults give a dominant cavern system of
    ~45k cells on a 256x256 grid.
    """
    rng = np.random.default_rng(seed)
    walls = rng.random((height, width)) < wall_p
    walls[0, :] = walls[-1, :] = walls[:, 0] = walls[:, -1] = True
    for _ in range(iterations):
        padded = np.pad(walls, 1, constant_values=True)
        count = sum(
            padded[1 + dr : height + 1 + dr, 1 + dc : width + 1 + dc]
            for dr in (-1, 0, 1)
            for dc in (-1, 0, 1)
            if (dr, dc) != (0, 0)
        )
        walls = count >= 4
        walls[0, :] = walls[-1, :] = walls[:, 0] = walls[:, -1] = True
    for _ in range(erode):
        padded = np.pad(walls, 1, constant_values=True)
        core = np.ones_like(walls)
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                core &= padded[1 + dr : height + 1 + dr, 1 + dc : width + 1 + dc]
        walls = core
        walls[0, :] = walls[-1, :] = walls[:, 0] = walls[:, -1] = True
    return GridMap(~walls)


def component_labels(grid: GridMap) -> np.ndarray:
    """Flat 4-connected component label per cell; -1 on blocked cells."""
    from scipy import ndimage

    labels, _ = ndimage.label(grid.passable, structure=_CROSS)
    return labels.ravel() - 1


def generate_scenario(
    grid: GridMap,
    count: int,
    seed: int,
    map_name: str = "map",
    largest_component_only: bool = True,
) -> list[ScenarioEntry]:
    """Random start/goal pairs: starts pairwise distinct, goals pairwise
    distinct, each pair connected. Entries carry exact distances."""
    rng = random.Random(seed)
    labels = component_labels(grid)
    by_label: dict[int, list[int]] = {}
    for idx, lab in enumerate(labels):
        if lab >= 0:
            by_label.setdefault(int(lab), []).append(idx)
    if largest_component_only:
        biggest = max(by_label, key=lambda lab: len(by_label[lab]))
        by_label = {biggest: by_label[biggest]}
    eligible = [idx for cells in by_label.values() if len(cells) >= 2 for idx in cells]
    if len(eligible) < count:
        raise ValueError(f"map has {len(eligible)} eligible cells, need {count} starts")
    starts = rng.sample(eligible, count)
    goals: list[int] = []
    taken: set[int] = set()
    for s in starts:
        pool = by_label[int(labels[s])]
        goal = None
        for _ in range(50):
            g = pool[rng.randrange(len(pool))]
            if g != s and g not in taken:
                goal = g
                break
        if goal is None:  # dense usage: deterministic sweep
            for g in pool:
                if g != s and g not in taken:
                    goal = g
                    break
        if goal is None:
            raise ValueError("not enough distinct goal cells in component")
        taken.add(goal)
        goals.append(goal)

    entries = []
    chunk = 128
    for lo in range(0, count, chunk):
        rows = _distance_rows(grid, starts[lo : lo + chunk])
        for off, (s, g) in enumerate(zip(starts[lo : lo + chunk], goals[lo : lo + chunk])):
            d = int(rows[off][g])
            if d >= UNREACHABLE:
                raise AssertionError("sampled pair is disconnected")
            entries.append(
                ScenarioEntry(start=grid.cell(s), goal=grid.cell(g), reference_distance=float(d))
            )
    return entries


def scenario_text(grid: GridMap, entries: list[ScenarioEntry], map_name: str) -> str:
    """Serialize entries as a MovingAI .scen file (x = col, y = row)."""
    lines = ["version 1"]
    for i, e in enumerate(entries):
        sy, sx = e.start
        gy, gx = e.goal
        lines.append(
            "\t".join(
                str(x)
                for x in (
                    i // 10, map_name, grid.width, grid.height,
                    sx, sy, gx, gy, f"{e.reference_distance:.8f}",
                )
            )
        )
    return "\n".join(lines) + "\n"


def random_instance(
    seed: int,
    width: int = 8,
    height: int = 8,
    density: float = 0.2,
    n_agents: int = 4,
) -> tuple[GridMap, list[int], list[int]]:
    """A small random single-step instance: starts/goals as flat indices,
    each agent's goal reachable from its start."""
    rng = random.Random(seed)
    for attempt in range(1000):
        grid = random_grid(width, height, density, seed * 1009 + attempt)
        labels = component_labels(grid)
        by_label: dict[int, list[int]] = {}
        for idx, lab in enumerate(labels):
            if lab >= 0:
                by_label.setdefault(int(lab), []).append(idx)
        eligible = [idx for cells in by_label.values() if len(cells) >= 2 for idx in cells]
        if len(eligible) < n_agents:
            continue
        starts = rng.sample(eligible, n_agents)
        goals: list[int] = []
        taken: set[int] = set()
        ok = True
        for s in starts:
            pool = [g for g in by_label[int(labels[s])] if g != s and g not in taken]
            if not pool:
                ok = False
                break
            g = pool[rng.randrange(len(pool))]
            taken.add(g)
            goals.append(g)
        if ok:
            return grid, starts, goals
    raise ValueError(f"could not sample an instance for seed {seed}")
