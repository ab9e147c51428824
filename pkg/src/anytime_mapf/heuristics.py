"""Exact cost-to-go tables and the single-step objective.

The per-step cost of a move is 1 except for an agent resting on its goal,
which pays 0. An action's f-value is that step cost plus the exact remaining
distance of the target cell, so the single-step objective is the f-sum over
agents.
"""
from __future__ import annotations

from array import array

import numpy as np

from .grid import Cell, GridMap

# Sentinel distance for cells that cannot reach the goal. Large enough that
# any f arithmetic stays far below it, small enough to fit int32.
UNREACHABLE = 1 << 30


class HeuristicTable:
    """Distances to one goal from every cell, in unit moves.

    ``dist`` is a flat array indexed by cell index; unreachable (and blocked)
    cells hold :data:`UNREACHABLE`.
    """

    __slots__ = ("goal", "dist")

    def __init__(self, goal: int, dist: array):
        self.goal = goal
        self.dist = dist

    def reachable(self, idx: int) -> bool:
        return self.dist[idx] < UNREACHABLE


def _distance_rows(grid: GridMap, goal_indices: list[int]) -> np.ndarray:
    from scipy.sparse.csgraph import dijkstra

    raw = dijkstra(grid.csgraph, directed=True, indices=goal_indices, unweighted=True)
    raw = np.atleast_2d(raw)
    return np.where(np.isinf(raw), UNREACHABLE, raw).astype(np.int32)


def compute_table(grid: GridMap, goal: Cell | int) -> HeuristicTable:
    """Backward breadth-first distances from ``goal`` over the whole grid."""
    return compute_tables(grid, [goal])[0]


def compute_tables(grid: GridMap, goals: list[Cell | int]) -> list[HeuristicTable]:
    """Tables for many goals in one batched graph traversal."""
    goal_idx: list[int] = []
    for g in goals:
        idx = g if isinstance(g, int) else grid.index(g)
        if not grid._passable_flat[idx]:
            raise ValueError(f"goal {g} is not passable")
        goal_idx.append(idx)
    unique = sorted(set(goal_idx))
    rows = _distance_rows(grid, unique)
    by_goal: dict[int, HeuristicTable] = {}
    for pos, g in enumerate(unique):
        dist = array("i")
        dist.frombytes(np.ascontiguousarray(rows[pos]).tobytes())
        by_goal[g] = HeuristicTable(g, dist)
    return [by_goal[g] for g in goal_idx]


def step_cost(s: int, s_next: int, goal: int) -> int:
    """1 for any action except resting on the goal, which is free."""
    return 0 if s == s_next == goal else 1


def fvalue(table: HeuristicTable, s: int, s_next: int) -> int:
    """step_cost + exact cost-to-go of the target cell."""
    d = table.dist[s_next]
    if d >= UNREACHABLE:
        raise ValueError(f"cell {s_next} cannot reach goal {table.goal}")
    return step_cost(s, s_next, table.goal) + d


def min_fvalue(grid: GridMap, table: HeuristicTable, s: int) -> int:
    """The agent's individually best f-value over its action set.

    This is the per-agent term of the lower-bound f-value.
    """
    best = None
    for v in grid.neighbor_table[s]:
        d = table.dist[v]
        if d >= UNREACHABLE:
            continue
        f = (0 if s == v == table.goal else 1) + d
        if best is None or f < best:
            best = f
    if best is None:
        raise ValueError(f"cell {s} cannot reach goal {table.goal}")
    return best


def plan_fsum(
    grid: GridMap, tables: list[HeuristicTable], config: list[int], plan: list[int]
) -> int:
    """Total f-value of a complete step plan."""
    total = 0
    for i, (s, v) in enumerate(zip(config, plan)):
        total += fvalue(tables[i], s, v)
    return total
