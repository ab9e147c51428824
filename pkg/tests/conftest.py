"""Shared fixtures and helpers for the test suite."""
from __future__ import annotations

import pytest

from anytime_mapf import GridMap, compute_tables, parse_map


def grid_from(rows: list[str]) -> GridMap:
    """Build a GridMap from ascii rows ('.' open, '@' blocked)."""
    header = ["type octile", f"height {len(rows)}", f"width {len(rows[0])}", "map"]
    return parse_map("\n".join(header + rows) + "\n")


def make_instance(rows, starts_rc, goals_rc):
    """(grid, starts, goals, tables) from ascii rows and (row, col) pairs."""
    grid = grid_from(rows)
    starts = [grid.index(c) for c in starts_rc]
    goals = [grid.index(c) for c in goals_rc]
    return grid, starts, goals, compute_tables(grid, goals)


@pytest.fixture
def open3x3():
    return grid_from(["...", "...", "..."])


@pytest.fixture
def corridor_pushback():
    """Corridor push-back instance: orange head-on against three blues,
    two independent greens in a separate strip.

    PIBT (orange highest priority) pushes the blues back; the optimal step has
    orange move back instead. Agents: 0 orange, 1-3 blue, 4-5 green.
    """
    rows = [".......", "@@@@@@@", "......."]
    starts = [(0, 2), (0, 3), (0, 4), (0, 5), (2, 0), (2, 5)]
    goals = [(0, 5), (0, 0), (0, 1), (0, 2), (2, 2), (2, 3)]
    return make_instance(rows, starts, goals)
