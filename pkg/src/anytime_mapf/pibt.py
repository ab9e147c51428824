"""Single-step PIBT planning with optional disjoint-group instrumentation.

Agents are planned in descending priority. A blocked agent lends its priority
to the agent in its way (priority inheritance); a failed recursion makes the
pusher try its next candidate (backtracking). When a :class:`GroupSet` is
supplied, every conflict and bump records a union of the two agents involved;
the bookkeeping never changes the plan.
"""
from __future__ import annotations

import random
import sys

from .grid import GridMap
from .groups import GroupSet
from .heuristics import UNREACHABLE, HeuristicTable

_MASK = (1 << 63) - 1


def _tie_rng(seed: int, step_key: int, agent: int) -> random.Random:
    """Deterministic tie-break stream per (seed, step, agent)."""
    x = (seed * 0x9E3779B97F4A7C15 + step_key) & _MASK
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    x = (x + agent) * 0x94D049BB133111EB & _MASK
    return random.Random(x ^ (x >> 31))


class PriorityState:
    """Per-agent planning priorities.

    priority = timesteps elapsed since the agent last occupied its goal, plus
    a fixed per-agent epsilon in [0, 1) that keeps priorities pairwise
    distinct. Reaching the goal resets the priority to epsilon.
    """

    def __init__(self, priorities: list[float], epsilon: list[float]):
        if len(set(priorities)) != len(priorities):
            raise ValueError("priorities must be pairwise distinct")
        self.priorities = list(priorities)
        self.epsilon = list(epsilon)

    @classmethod
    def default(cls, n: int) -> "PriorityState":
        eps = [i / n for i in range(n)]
        return cls(list(eps), eps)

    @classmethod
    def fixed(cls, values: list[float]) -> "PriorityState":
        """Externally chosen priorities (tests, alternative strategies)."""
        return cls(list(values), list(values))

    def update(self, config: list[int], goals: list[int]) -> None:
        """Advance priorities after executing a step into ``config``."""
        for i, (s, g) in enumerate(zip(config, goals)):
            if s == g:
                self.priorities[i] = self.epsilon[i]
            else:
                self.priorities[i] += 1.0

    def order(self) -> list[int]:
        return sorted(range(len(self.priorities)), key=self.priorities.__getitem__, reverse=True)


def _priority_values(priorities) -> list[float]:
    return priorities.priorities if isinstance(priorities, PriorityState) else list(priorities)


def _candidate_pairs(
    grid: GridMap,
    table: HeuristicTable,
    s: int,
    agent: int,
    seed: int,
    step_key: int,
) -> list[tuple[int, int]]:
    """(f, cell) candidates of one agent, f-ascending, seeded shuffle on ties."""
    goal = table.goal
    dist = table.dist
    items = []
    for v in grid.neighbor_table[s]:
        d = dist[v]
        if d >= UNREACHABLE:
            continue
        items.append((0 if v == s and s == goal else 1 + d, v))
    if len(items) > 1:
        _tie_rng(seed, step_key, agent).shuffle(items)
        items.sort(key=lambda fv: fv[0])
    return items


def sorted_candidates(
    grid: GridMap,
    tables: list[HeuristicTable],
    config: list[int],
    agent: int,
    seed: int = 0,
    step_key: int = 0,
) -> list[int]:
    """The agent's reachable actions, best f first (see :func:`_candidate_pairs`)."""
    return [v for _, v in _candidate_pairs(grid, tables[agent], config[agent], agent, seed, step_key)]


class _StepContext:
    """Mutable working state for one planning step (shared with the anytime solver)."""

    __slots__ = (
        "grid", "tables", "config", "plan", "occ_now", "occ_next",
        "seed", "step_key", "groupset", "_cand", "nodes",
    )

    def __init__(
        self,
        grid: GridMap,
        tables: list[HeuristicTable],
        config: list[int],
        seed: int,
        step_key: int,
        groupset: GroupSet | None,
    ):
        n = len(config)
        if len(tables) != n:
            raise ValueError("one heuristic table per agent required")
        if len(set(config)) != n:
            raise ValueError("configuration has two agents on one cell")
        for s in config:
            if not grid._passable_flat[s]:
                raise ValueError(f"agent cell {grid.cell(s)} is not passable")
        self.grid = grid
        self.tables = tables
        self.config = config
        self.plan: list[int | None] = [None] * n
        self.occ_now = [-1] * grid.num_cells
        self.occ_next = [-1] * grid.num_cells
        for i, s in enumerate(config):
            self.occ_now[s] = i
        self.seed = seed
        self.step_key = step_key
        self.groupset = groupset
        self._cand: list[list[tuple[int, int]] | None] = [None] * n
        self.nodes = 0

    def candidates(self, k: int) -> list[tuple[int, int]]:
        got = self._cand[k]
        if got is None:
            got = _candidate_pairs(
                self.grid, self.tables[k], self.config[k], k, self.seed, self.step_key
            )
            self._cand[k] = got
        return got

    def apply_forced(self, forced: dict[int, int]) -> bool:
        """Reserve forced assignments; False if they are jointly infeasible."""
        if len(set(forced.values())) != len(forced):
            return False
        for a, v in forced.items():
            if v not in self.grid.neighbor_table[self.config[a]]:
                return False
            if self.tables[a].dist[v] >= UNREACHABLE:
                return False
            j = self.occ_now[v]
            if j >= 0 and j != a and forced.get(j) == self.config[a]:
                return False  # forced swap
        for a, v in forced.items():
            self.plan[a] = v
            self.occ_next[v] = a
        return True


def _pibt_gr(ctx: _StepContext, k: int) -> bool:
    """Plan agent k, recursing into bumped agents; False when out of candidates."""
    plan = ctx.plan
    occ_now = ctx.occ_now
    occ_next = ctx.occ_next
    groupset = ctx.groupset
    s = ctx.config[k]
    for _, v in ctx.candidates(k):
        j = occ_next[v]
        if j >= 0:  # vertex collision with a planned agent
            if groupset is not None:
                groupset.union(k, j)
            continue
        j = occ_now[v]
        if j >= 0 and plan[j] == s:  # edge collision: j is crossing into s
            if groupset is not None:
                groupset.union(k, j)
            continue
        plan[k] = v
        occ_next[v] = k
        if j >= 0 and plan[j] is None:  # unplanned agent parked on v: inherit
            if groupset is not None:
                groupset.union(k, j)
            if _pibt_gr(ctx, j):
                return True
            plan[k] = None
            occ_next[v] = -1
            continue
        return True
    return False


def _plan_all(ctx: _StepContext, order: list[int]) -> bool:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 3 * len(order) + 500))
    for k in order:
        if ctx.plan[k] is None:
            if not _pibt_gr(ctx, k):
                return False
    return True


def pibt_step(
    grid: GridMap,
    tables: list[HeuristicTable],
    config: list[int],
    priorities,
    *,
    seed: int = 0,
    step_key: int = 0,
    groupset: GroupSet | None = None,
    forced: dict[int, int] | None = None,
) -> list[int] | None:
    """One PIBT step: a complete, collision-free next cell per agent.

    Args:
        config: current cell index per agent (pairwise distinct, passable).
        priorities: :class:`PriorityState` or raw per-agent values.
        groupset: optional :class:`GroupSet` to record agent interactions in;
            pure bookkeeping, the returned plan is identical either way.
        forced: next cells imposed on some agents (LaCAM constraints); forced
            agents are planned first and never iterate candidates.

    Returns:
        The plan, or None when forced assignments are jointly infeasible (an
        unconstrained step over agents with reachable goals never fails).
    """
    ctx = _StepContext(grid, tables, config, seed, step_key, groupset)
    if forced:
        if not ctx.apply_forced(forced):
            return None
    values = _priority_values(priorities)
    order = sorted(range(len(config)), key=values.__getitem__, reverse=True)
    if not _plan_all(ctx, order):
        return None
    return ctx.plan  # complete: no None entries left
