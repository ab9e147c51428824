"""Minimal LaCAM: depth-first search over joint configurations.

High-level nodes hold one configuration each and lazily expand a tree of
per-agent vertex constraints; a pluggable single-step generator (PIBT or the
anytime solver) realizes successor configurations that honor the constraints.
Regenerating a known configuration re-pushes its existing node, so each
configuration lives in exactly one node.
"""
from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

from .anytime import Budget, SolveMode, anytime_pibt
from .grid import GridMap
from .heuristics import HeuristicTable
from .pibt import PriorityState, pibt_step

# (config, forced partial assignment, step_key) -> complete plan or None
Generator = Callable[[list[int], dict[int, int], int], Optional[list[int]]]


class _ConstraintNode:
    __slots__ = ("parent", "agent", "cell", "depth")

    def __init__(self, parent: Optional["_ConstraintNode"], agent: int, cell: int):
        self.parent = parent
        self.agent = agent
        self.cell = cell
        self.depth = 0 if parent is None else parent.depth + 1

    def forced(self) -> dict[int, int]:
        out: dict[int, int] = {}
        node = self
        while node.parent is not None:
            out[node.agent] = node.cell
            node = node.parent
        return out


class _HighLevelNode:
    __slots__ = ("config", "tree", "parent", "order")

    def __init__(
        self, config: tuple[int, ...], parent: Optional["_HighLevelNode"], order: list[int]
    ):
        self.config = config
        self.tree: deque[_ConstraintNode] = deque([_ConstraintNode(None, -1, -1)])
        self.parent = parent
        self.order = order  # constraint-tree agent order, off-goal agents first


@dataclass
class LacamResult:
    paths: list[list[int]] | None
    nodes_generated: int
    nodes_expanded: int
    generator_calls: int
    elapsed_s: float

    @property
    def solved(self) -> bool:
        return self.paths is not None


def make_generator(
    grid: GridMap,
    tables: list[HeuristicTable],
    goals: list[int],
    algorithm: str,
    *,
    seed: int = 0,
    step_budget: Budget | None = None,
) -> Generator:
    """Step generators for lacam+{pibt,apibt,apibt-tb}.

    Generator priorities: agents still off-goal outrank agents at their goals,
    tie-broken by a fixed start-distance rank.
    """
    n = len(goals)
    rank = sorted(range(n), key=lambda i: tables[i].dist[goals[i]])
    eps = [0.0] * n
    for pos, i in enumerate(rank):
        eps[i] = pos / n

    def priorities_for(config: list[int]) -> list[float]:
        return [eps[i] + (0.0 if config[i] == goals[i] else 1.0) for i in range(n)]

    if algorithm == "pibt":

        def gen(config: list[int], forced: dict[int, int], step_key: int):
            return pibt_step(
                grid, tables, config, priorities_for(config),
                seed=seed, step_key=step_key, forced=forced,
            )

        return gen

    if algorithm in ("apibt", "apibt-tb"):
        mode = SolveMode.TIEBREAK if algorithm == "apibt-tb" else SolveMode.OPTIMAL
        budget = step_budget if step_budget is not None else Budget.wall_ms(0)

        def gen(config: list[int], forced: dict[int, int], step_key: int):
            result = anytime_pibt(
                grid, tables, config, priorities_for(config),
                budget=budget, mode=mode, seed=seed, step_key=step_key, forced=forced,
            )
            return None if result is None else result.plan

        return gen

    raise ValueError(f"unknown generator algorithm {algorithm!r}")


def lacam_solve(
    grid: GridMap,
    tables: list[HeuristicTable],
    starts: list[int],
    goals: list[int],
    generator: Generator,
    time_limit_s: float = 60.0,
    *,
    seed: int = 0,
) -> LacamResult:
    """Search for full collision-free paths from starts to goals.

    Fails (paths=None) on timeout or when the search space is exhausted.
    """
    n = len(starts)
    if len(goals) != n:
        raise ValueError("starts and goals must have equal length")
    if len(set(starts)) != n or len(set(goals)) != n:
        raise ValueError("starts and goals must be pairwise distinct")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    goal_config = tuple(goals)

    def constraint_order(config: tuple[int, ...]) -> list[int]:
        # Agents still traveling come first (farthest first), so the lazy
        # constraint tree perturbs the stuck agents before the settled ones.
        return sorted(
            range(n),
            key=lambda i: (config[i] == goals[i], -tables[i].dist[config[i]], i),
        )

    init = _HighLevelNode(tuple(starts), None, constraint_order(tuple(starts)))
    open_list: list[_HighLevelNode] = [init]
    explored: dict[tuple[int, ...], _HighLevelNode] = {init.config: init}
    generated = 1
    expanded = 0
    gen_calls = 0

    while open_list:
        if time.perf_counter() - t0 > time_limit_s:
            break
        node = open_list[-1]
        if node.config == goal_config:
            return LacamResult(
                paths=_backtrack(node, n),
                nodes_generated=generated,
                nodes_expanded=expanded,
                generator_calls=gen_calls,
                elapsed_s=time.perf_counter() - t0,
            )
        if not node.tree:
            open_list.pop()
            continue
        constraint = node.tree.popleft()
        if constraint.depth < n:
            agent = node.order[constraint.depth]
            cells = list(grid.neighbor_table[node.config[agent]])
            rng.shuffle(cells)
            for cell in cells:
                node.tree.append(_ConstraintNode(constraint, agent, cell))
        expanded += 1
        gen_calls += 1
        plan = generator(list(node.config), constraint.forced(), gen_calls)
        if plan is None:
            continue
        new_config = tuple(plan)
        known = explored.get(new_config)
        if known is not None:
            open_list.append(known)
            continue
        child = _HighLevelNode(new_config, node, constraint_order(new_config))
        explored[new_config] = child
        open_list.append(child)
        generated += 1

    return LacamResult(
        paths=None,
        nodes_generated=generated,
        nodes_expanded=expanded,
        generator_calls=gen_calls,
        elapsed_s=time.perf_counter() - t0,
    )


def _backtrack(node: _HighLevelNode, n: int) -> list[list[int]]:
    configs: list[tuple[int, ...]] = []
    cur: _HighLevelNode | None = node
    while cur is not None:
        configs.append(cur.config)
        cur = cur.parent
    configs.reverse()
    return [[cfg[i] for cfg in configs] for i in range(n)]
