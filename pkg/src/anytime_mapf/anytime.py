"""Anytime refinement of a PIBT step over disjoint agent groups.

The solver first runs an instrumented PIBT pass that both produces the
incumbent plan and partitions the interacting agents into disjoint groups.
Each group is then re-solved by a depth-first search over its agents' actions
(ordered by PIBT's priority-inheritance logic) that accumulates f-values,
records strictly better complete assignments, and prunes branches that cannot
beat the group's best known f-sum. Groups whose search touches an outside
agent are merged and requeued; groups cut by the deadline are requeued as-is.
The incumbent is complete and collision-free at every instant, so the best
plan so far can be returned whenever the budget expires.
"""
from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .grid import GridMap
from .groups import Group, GroupSet, extract_groups, remove_not_disjoint_with, time_per_group
from .heuristics import HeuristicTable
from .pibt import _plan_all, _priority_values, _StepContext


class SolveMode(Enum):
    OPTIMAL = "optimal"
    TIEBREAK = "tiebreak"


class WallDeadline:
    """Monotonic-clock deadline; expiry is monotone."""

    __slots__ = ("end",)

    def __init__(self, budget_s: float):
        self.end = time.perf_counter() + budget_s

    def expired(self) -> bool:
        return time.perf_counter() >= self.end

    def remaining(self) -> float:
        return self.end - time.perf_counter()

    def tick(self) -> None:
        pass

    def slice(self, amount: float) -> "WallDeadline":
        child = WallDeadline.__new__(WallDeadline)
        child.end = min(self.end, time.perf_counter() + amount)
        return child


class NodeDeadline:
    """Deterministic deadline counted in candidate iterations."""

    __slots__ = ("budget", "used")

    def __init__(self, budget: float):
        self.budget = float(budget)
        self.used = 0

    def expired(self) -> bool:
        return self.used >= self.budget

    def remaining(self) -> float:
        return self.budget - self.used

    def tick(self) -> None:
        self.used += 1

    def slice(self, amount: float) -> "_NodeSlice":
        return _NodeSlice(self, amount)


class _NodeSlice:
    __slots__ = ("root", "limit")

    def __init__(self, root: NodeDeadline, amount: float, cap: float | None = None):
        self.root = root
        limit = min(root.used + amount, root.budget)
        self.limit = limit if cap is None else min(limit, cap)

    def expired(self) -> bool:
        return self.root.used >= self.limit

    def remaining(self) -> float:
        return self.limit - self.root.used

    def tick(self) -> None:
        self.root.used += 1

    def slice(self, amount: float) -> "_NodeSlice":
        return _NodeSlice(self.root, amount, cap=self.limit)


@dataclass(frozen=True)
class Budget:
    """A planning budget: wall milliseconds or deterministic node counts.

    The clock covers the refinement phase only, so a zero budget returns the
    initial PIBT plan untouched.
    """

    mode: str
    amount: float

    @classmethod
    def wall_ms(cls, ms: float) -> "Budget":
        return cls("wall", ms)

    @classmethod
    def nodes(cls, n: float) -> "Budget":
        return cls("nodes", n)

    @classmethod
    def unbounded(cls) -> "Budget":
        return cls("nodes", math.inf)

    def start(self):
        if self.mode == "wall":
            return WallDeadline(self.amount / 1000.0)
        if self.mode == "nodes":
            return NodeDeadline(self.amount)
        raise ValueError(f"unknown budget mode {self.mode!r}")


@dataclass
class GroupSolveResult:
    """Outcome of one group solve.

    ``early_exit`` is False only when the DFS exhausted every non-pruned
    branch before its deadline; ``new_group`` covers the group plus everything
    it got merged with (equal to the group's own agents when no cross-group
    conflict was seen).
    """

    early_exit: bool
    new_group: frozenset[int]
    nodes: int


@dataclass
class AnytimeResult:
    plan: list[int]
    f_initial: int
    f_final: int
    f_lowerbound: int
    n_groups: int
    n_merges: int
    finished_all_groups: bool
    nodes: int
    groups: list[Group]

    @property
    def improvement(self) -> int:
        return self.f_initial - self.f_final


def tiebreak_candidates(
    grid: GridMap,
    tables: list[HeuristicTable],
    config: list[int],
    agent: int,
    seed: int = 0,
    step_key: int = 0,
) -> list[int]:
    """The agent's actions tied at its best individual f-value."""
    from .pibt import _candidate_pairs

    pairs = _candidate_pairs(grid, tables[agent], config[agent], agent, seed, step_key)
    if not pairs:
        return []
    fmin = pairs[0][0]
    return [v for f, v in pairs if f == fmin]


def _dfs(
    ctx: _StepContext,
    gr: Group,
    ddl,
    tiebreak: bool,
    prune: bool,
    best: list[int],
    k: int | None,
    remaining: int,
    f_c: int,
) -> None:
    """Depth-first recursion: plan agent k, then the rest of the group's AoP."""
    plan = ctx.plan
    occ_now = ctx.occ_now
    occ_next = ctx.occ_next
    groupset = ctx.groupset
    if k is None:
        for a in gr.agents:  # AoP is priority-sorted: first unplanned is top
            if plan[a] is None:
                k = a
                break
    s = ctx.config[k]
    cands = ctx.candidates(k)
    if tiebreak and cands:
        fmin = cands[0][0]
        end = 1
        while end < len(cands) and cands[end][0] == fmin:
            end += 1
        cands = cands[:end]
    remaining -= 1
    for f, v in cands:
        if ddl.expired():
            return  # time cutoff: unwind, earlyExit stays set
        ddl.tick()
        ctx.nodes += 1
        j = occ_next[v]
        if j >= 0:  # vertex collision with a planned agent (any group)
            groupset.union(k, j)
            continue
        j = occ_now[v]
        if j >= 0 and plan[j] == s:  # edge collision
            groupset.union(k, j)
            continue
        f_next = f_c + f
        if prune and f_next >= gr.fb:
            return  # f-sorted candidates: later ones are no better
        plan[k] = v
        occ_next[v] = k
        if remaining == 0:
            if f_next < gr.fb:  # always true when pruning is on
                gr.record_better(f_next)
                for a in gr.agents:
                    best[a] = plan[a]
        else:
            if j >= 0 and plan[j] is None:  # bumped a parked group agent
                groupset.union(k, j)
                nxt = j
            else:
                nxt = None
            _dfs(ctx, gr, ddl, tiebreak, prune, best, nxt, remaining, f_next)
        plan[k] = None
        occ_next[v] = -1


def _solve_group(
    ctx: _StepContext,
    gr: Group,
    best: list[int],
    deadline,
    mode: SolveMode,
    prune: bool,
) -> GroupSolveResult:
    plan = ctx.plan
    occ_next = ctx.occ_next
    for a in gr.agents:  # clear for replanning
        v = plan[a]
        if v is not None:
            occ_next[v] = -1
            plan[a] = None
    nodes0 = ctx.nodes
    _dfs(ctx, gr, deadline, mode is SolveMode.TIEBREAK, prune, best, None, len(gr.agents), 0)
    early_exit = deadline.expired()
    for a in gr.agents:  # working plan keeps the group's best-known cells
        v = best[a]
        plan[a] = v
        occ_next[v] = a
    new_group: set[int] = set()
    for a in gr.agents:
        new_group |= ctx.groupset.component(a)
    return GroupSolveResult(
        early_exit=early_exit,
        new_group=frozenset(new_group),
        nodes=ctx.nodes - nodes0,
    )


def anytime_pibt_r(
    grid: GridMap,
    tables: list[HeuristicTable],
    config: list[int],
    working_plan: list[int],
    incumbent: list[int],
    group: Group,
    groupset: GroupSet | None = None,
    *,
    deadline=None,
    mode: SolveMode = SolveMode.OPTIMAL,
    seed: int = 0,
    step_key: int = 0,
    prune: bool = True,
) -> GroupSolveResult:
    """Re-solve one group against a frozen rest-of-plan.

    ``working_plan`` must be a complete collision-free plan; the group's
    entries are cleared, searched, and left at the group's best-known cells.
    Strictly better complete group assignments are written into ``incumbent``
    and lower ``group.fb``.
    """
    if incumbent is working_plan:
        raise ValueError("incumbent and working_plan must be distinct lists")
    ctx = _StepContext(grid, tables, config, seed, step_key, groupset or GroupSet(len(config)))
    for i, v in enumerate(working_plan):
        if ctx.occ_next[v] >= 0:
            raise ValueError("working_plan has a vertex collision")
        ctx.plan[i] = v
        ctx.occ_next[v] = i
    if deadline is None:
        deadline = NodeDeadline(math.inf)
    result = _solve_group(ctx, group, incumbent, deadline, mode, prune)
    for a in group.agents:
        working_plan[a] = ctx.plan[a]
    return result


def anytime_pibt(
    grid: GridMap,
    tables: list[HeuristicTable],
    config: list[int],
    priorities,
    *,
    budget: Budget,
    mode: SolveMode = SolveMode.OPTIMAL,
    seed: int = 0,
    step_key: int = 0,
    forced: dict[int, int] | None = None,
    prune: bool = True,
    grouped: bool = True,
) -> AnytimeResult | None:
    """One anytime single-step solve.

    Runs the instrumented PIBT pass, then spends ``budget`` improving the
    disjoint agent groups it detected. The budget clock starts after the
    initial pass, so ``budget`` 0 returns a plan bit-identical to
    :func:`pibt_step`.

    ``grouped=False`` replaces the detected groups by one group holding every
    agent (the exponential no-decomposition baseline). Returns None only when
    ``forced`` assignments are jointly infeasible.
    """
    n = len(config)
    groupset = GroupSet(n, frozen=frozenset(forced) if forced else frozenset())
    ctx = _StepContext(grid, tables, config, seed, step_key, groupset)
    if forced:
        if not ctx.apply_forced(forced):
            return None
    values = _priority_values(priorities)
    order = sorted(range(n), key=values.__getitem__, reverse=True)
    if not _plan_all(ctx, order):
        return None
    plan = ctx.plan

    def plan_f(i: int, v: int) -> int:
        t = ctx.tables[i]
        return 0 if v == config[i] == t.goal else 1 + t.dist[v]

    f_initial = sum(plan_f(i, plan[i]) for i in range(n))
    f_lowerbound = sum(ctx.candidates(i)[0][0] for i in range(n))
    best = list(plan)

    if grouped:
        groups = extract_groups(
            groupset, values, group_cost=lambda members: sum(plan_f(a, plan[a]) for a in members)
        )
    else:
        movable = [a for a in order if not forced or a not in forced]
        groups = (
            [Group(agents=tuple(movable), fb=sum(plan_f(a, plan[a]) for a in movable))]
            if movable
            else []
        )
    queue: deque[Group] = deque(groups)
    solved: list[Group] = list(groups)
    deadline = budget.start()
    merges = 0
    while queue and not deadline.expired():
        gr = queue.popleft()
        share = time_per_group(len(gr.agents), queue, deadline.remaining())
        result = _solve_group(ctx, gr, best, deadline.slice(share), mode, prune)
        if result.new_group != gr.agent_set:
            merges += 1
            members = sorted(result.new_group, key=values.__getitem__, reverse=True)
            merged = Group(
                agents=tuple(members), fb=sum(plan_f(a, best[a]) for a in members)
            )
            remove_not_disjoint_with(queue, merged)
            solved.append(merged)
        elif result.early_exit:
            queue.append(gr)  # revisit later if time remains

    return AnytimeResult(
        plan=best,
        f_initial=f_initial,
        f_final=sum(plan_f(i, best[i]) for i in range(n)),
        f_lowerbound=f_lowerbound,
        n_groups=len(groups),
        n_merges=merges,
        finished_all_groups=not queue,
        nodes=ctx.nodes,
        groups=solved,
    )
