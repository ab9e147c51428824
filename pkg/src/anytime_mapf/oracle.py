"""Brute-force optimal single-step solver, used as ground truth in tests.

Enumerates the joint action space of the free agents (at most 5^|free|),
filters vertex/edge collisions against each other and against frozen plans,
and returns a minimum-f-sum assignment. Kept independent of the PIBT/anytime
code paths: it shares only the grid/heuristic data structures.
"""
from __future__ import annotations

from dataclasses import dataclass

from .grid import GridMap
from .heuristics import UNREACHABLE, HeuristicTable

MAX_FREE_AGENTS = 8  # 5^8 joint actions is the enumeration bound


@dataclass(frozen=True)
class JointAssignment:
    next_cells: tuple[int, ...]
    fsum: int  # over the free agents


def brute_force_step(
    grid: GridMap,
    tables: list[HeuristicTable],
    config: list[int],
    subset: list[int] | None = None,
    frozen_plans: dict[int, int] | None = None,
    prune: bool = True,
) -> JointAssignment | None:
    """Optimal single step for ``subset`` (default: all agents).

    Frozen agents keep their given plans; ties are broken lexicographically
    by agent id then candidate order, identically with or without ``prune``.
    Returns None when no collision-free assignment exists.
    """
    n = len(config)
    free = list(range(n)) if subset is None else list(subset)
    if len(free) > MAX_FREE_AGENTS:
        raise ValueError(f"enumeration bound is {MAX_FREE_AGENTS} free agents, got {len(free)}")
    frozen_plans = dict(frozen_plans or {})
    free_set = set(free)
    if free_set & frozen_plans.keys():
        raise ValueError("an agent cannot be both free and frozen")
    if free_set | frozen_plans.keys() != set(range(n)):
        raise ValueError("every agent must be either free or frozen")

    occ_now = {s: i for i, s in enumerate(config)}
    next_of: dict[int, int] = {}  # planned next cell per agent, grown during the search
    occ_next: dict[int, int] = {}
    for a, v in frozen_plans.items():
        if v in occ_next:
            raise ValueError("frozen plans collide on a vertex")
        j = occ_now.get(v)
        if j is not None and j != a and frozen_plans.get(j) == config[a]:
            raise ValueError("frozen plans collide on an edge")
        occ_next[v] = a
        next_of[a] = v

    # Candidates per free agent: f-ascending, base move order on ties.
    cand: list[list[tuple[int, int]]] = []
    for a in free:
        s = config[a]
        t = tables[a]
        items = []
        for v in grid.neighbor_table[s]:
            d = t.dist[v]
            if d >= UNREACHABLE:
                continue
            items.append(((0 if v == s and s == t.goal else 1 + d), v))
        if not items:
            return None
        items.sort(key=lambda fv: fv[0])
        cand.append(items)

    suffix_min = [0] * (len(free) + 1)
    for i in range(len(free) - 1, -1, -1):
        suffix_min[i] = suffix_min[i + 1] + cand[i][0][0]

    best: list[tuple[int, ...] | None] = [None]
    best_fsum = [None]

    def search(idx: int, acc: int) -> None:
        if prune and best_fsum[0] is not None and acc + suffix_min[idx] >= best_fsum[0]:
            return
        if idx == len(free):
            if best_fsum[0] is None or acc < best_fsum[0]:
                best_fsum[0] = acc
                full = list(config)
                for a, v in next_of.items():
                    full[a] = v
                best[0] = tuple(full)
            return
        a = free[idx]
        s = config[a]
        for f, v in cand[idx]:
            if v in occ_next:
                continue
            j = occ_now.get(v)
            if j is not None and j != a and next_of.get(j) == s:
                continue  # edge collision
            occ_next[v] = a
            next_of[a] = v
            search(idx + 1, acc + f)
            del occ_next[v]
            del next_of[a]

    search(0, 0)
    if best[0] is None:
        return None
    return JointAssignment(next_cells=best[0], fsum=best_fsum[0])
