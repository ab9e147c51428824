"""Experiment orchestration: full-horizon runs, single-step studies, metrics.

Output schemas (consumed by the plotting frontend):

* step records:  CSV, header ``t,f_initial,f_final,f_lowerbound,groups,
  merges,plan_time_ms,finished_all_groups,schema_version``
* study records: CSV, header ``t,budget,f_initial,f_final,f_lowerbound,
  schema_version``
* run summary:   single JSON object with a ``schema_version`` field
"""
from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from .anytime import Budget, SolveMode, anytime_pibt
from .grid import Cell, GridMap, parse_map, parse_scenario
from .heuristics import HeuristicTable, compute_tables, min_fvalue, step_cost
from .lacam import lacam_solve, make_generator
from .mapgen import random_instance
from .oracle import brute_force_step
from .pibt import PriorityState, pibt_step

SCHEMA_VERSION = 1

# Deterministic-deadline calibration: 1 ms of budget buys this many candidate
# iterations in the group DFS. Keeps CI results machine-independent.
NODES_PER_MS = 1000.0

STANDALONE_ALGORITHMS = ("pibt", "apibt", "apibt-tb")
LACAM_ALGORITHMS = ("lacam+pibt", "lacam+apibt", "lacam+apibt-tb")
ALGORITHMS = STANDALONE_ALGORITHMS + LACAM_ALGORITHMS

DEFAULT_MAX_STEPS = 5000


class InstanceError(ValueError):
    """Invalid problem instance (duplicate cells, unreachable goal, ...)."""


def make_budget(budget_ms: float, mode: str) -> Budget:
    """Per-step budget from milliseconds; 'nodes' mode converts at NODES_PER_MS."""
    if mode == "wall":
        return Budget.wall_ms(budget_ms)
    if mode == "nodes":
        return Budget.nodes(round(budget_ms * NODES_PER_MS))
    raise ValueError(f"unknown budget mode {mode!r}")


@dataclass(frozen=True)
class Instance:
    grid: GridMap
    starts: list[int]
    goals: list[int]
    tables: list[HeuristicTable]
    map_name: str = "map"
    scen_name: str = "scen"


def build_instance(
    grid: GridMap,
    starts: list[int],
    goals: list[int],
    map_name: str = "map",
    scen_name: str = "scen",
) -> Instance:
    n = len(starts)
    if len(goals) != n or n == 0:
        raise InstanceError("need equally many starts and goals, at least one agent")
    if len(set(starts)) != n:
        raise InstanceError("duplicate start cells")
    if len(set(goals)) != n:
        raise InstanceError("duplicate goal cells")
    tables = compute_tables(grid, goals)
    for i, (s, t) in enumerate(zip(starts, tables)):
        if not t.reachable(s):
            raise InstanceError(f"agent {i}: goal {grid.cell(t.goal)} unreachable from {grid.cell(s)}")
    return Instance(grid, list(starts), list(goals), tables, map_name, scen_name)


def load_instance(map_path: str | Path, scen_path: str | Path, n_agents: int) -> Instance:
    """First ``n_agents`` scenario entries as a MAPF instance."""
    map_path, scen_path = Path(map_path), Path(scen_path)
    grid = parse_map(map_path.read_text())
    entries = parse_scenario(scen_path.read_text(), grid)
    if len(entries) < n_agents:
        raise InstanceError(f"scenario has {len(entries)} entries, need {n_agents}")
    starts = [grid.index(e.start) for e in entries[:n_agents]]
    goals = [grid.index(e.goal) for e in entries[:n_agents]]
    return build_instance(grid, starts, goals, map_path.name, scen_path.name)


@dataclass
class StepRecord:
    t: int
    f_initial: int
    f_final: int
    f_lowerbound: int
    groups: int
    merges: int
    plan_time_ms: float
    finished_all_groups: bool

    def __post_init__(self):
        if not self.f_lowerbound <= self.f_final <= self.f_initial:
            raise AssertionError(
                f"step record out of order: lb={self.f_lowerbound} "
                f"final={self.f_final} initial={self.f_initial}"
            )


@dataclass
class StudyRecord:
    t: int
    budget: float  # milliseconds (interpreted per budget mode)
    f_initial: int
    f_final: int
    f_lowerbound: int


@dataclass
class RunSummary:
    success: bool
    total_cost: int
    cost_lowerbound: int
    normalized_cost: float
    makespan: int
    total_plan_time_ms: float
    algorithm: str
    map: str
    scen: str
    agents: int
    seed: int
    step_budget_ms: float
    budget_mode: str
    failure_reason: str | None = None
    schema_version: int = SCHEMA_VERSION


@dataclass
class Violation:
    kind: str
    t: int
    agents: tuple[int, ...]
    cells: tuple[Cell, ...]


@dataclass
class RunResult:
    summary: RunSummary
    steps: list[StepRecord]
    paths: list[list[int]] | None


def validate_paths(
    grid: GridMap, paths: list[list[int]], goals: list[int] | None = None
) -> Violation | None:
    """Independent check of a full solution; None when clean.

    Verifies passability, unit moves, vertex/edge collisions at every step,
    and (when goals are given) goal attainment at the horizon.
    """
    n = len(paths)
    if n == 0:
        return None
    horizon = len(paths[0])
    for i, p in enumerate(paths):
        if len(p) != horizon:
            return Violation("length-mismatch", 0, (i,), ())
    for t in range(horizon):
        seen: dict[int, int] = {}
        for i in range(n):
            v = paths[i][t]
            if not grid._passable_flat[v]:
                return Violation("impassable", t, (i,), (grid.cell(v),))
            if v in seen:
                return Violation("vertex-collision", t, (seen[v], i), (grid.cell(v),))
            seen[v] = i
    for t in range(horizon - 1):
        occ = {paths[i][t]: i for i in range(n)}
        for i in range(n):
            cur, nxt = paths[i][t], paths[i][t + 1]
            if nxt not in grid.neighbor_table[cur]:
                return Violation("bad-move", t, (i,), (grid.cell(cur), grid.cell(nxt)))
            j = occ.get(nxt)
            if j is not None and j != i and paths[j][t + 1] == cur:
                return Violation(
                    "edge-collision", t, (i, j), (grid.cell(cur), grid.cell(nxt))
                )
    if goals is not None:
        for i in range(n):
            if paths[i][-1] != goals[i]:
                return Violation("goal-missed", horizon - 1, (i,), (grid.cell(paths[i][-1]),))
    return None


def path_total_cost(paths: list[list[int]], goals: list[int]) -> int:
    """Recount of the executed cost: 1 per move, waits on the goal are free."""
    total = 0
    for i, p in enumerate(paths):
        g = goals[i]
        for t in range(len(p) - 1):
            total += step_cost(p[t], p[t + 1], g)
    return total


def _assert_valid_step(grid: GridMap, config: list[int], plan: list[int]) -> None:
    # Solver contract: a returned plan is complete and collision-free.
    if any(v is None for v in plan):
        raise RuntimeError("solver returned an incomplete plan")
    if len(set(plan)) != len(plan):
        raise RuntimeError("solver plan has a vertex collision")
    occ = {s: i for i, s in enumerate(config)}
    for i, v in enumerate(plan):
        j = occ.get(v)
        if j is not None and j != i and plan[j] == config[i]:
            raise RuntimeError("solver plan has an edge collision")


def run_full_horizon(
    instance: Instance,
    algorithm: str,
    *,
    step_budget_ms: float = 0.0,
    budget_mode: str = "wall",
    seed: int = 0,
    time_limit_s: float = 60.0,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> RunResult:
    """Plan-execute loop (standalone algorithms) or one LaCAM search.

    The time limit caps the cumulative planning time, not execution. Success
    requires every agent resting on its goal simultaneously.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    grid, tables = instance.grid, instance.tables
    starts, goals = instance.starts, instance.goals
    cost_lowerbound = sum(t.dist[s] for s, t in zip(starts, tables))

    def summary(success, total_cost, makespan, plan_time_s, failure_reason=None):
        if cost_lowerbound > 0:
            normalized = total_cost / cost_lowerbound
        else:
            normalized = 1.0 if total_cost == 0 else float("inf")
        return RunSummary(
            success=success,
            total_cost=total_cost,
            cost_lowerbound=int(cost_lowerbound),
            normalized_cost=normalized,
            makespan=makespan,
            total_plan_time_ms=plan_time_s * 1000.0,
            algorithm=algorithm,
            map=instance.map_name,
            scen=instance.scen_name,
            agents=len(starts),
            seed=seed,
            step_budget_ms=step_budget_ms,
            budget_mode=budget_mode,
            failure_reason=failure_reason,
        )

    if algorithm in LACAM_ALGORITHMS:
        inner = algorithm.split("+", 1)[1]
        generator = make_generator(
            grid, tables, goals, inner,
            seed=seed, step_budget=make_budget(step_budget_ms, budget_mode),
        )
        res = lacam_solve(grid, tables, starts, goals, generator, time_limit_s, seed=seed)
        if not res.solved:
            return RunResult(summary(False, 0, 0, res.elapsed_s, "search-exhausted-or-timeout"), [], None)
        violation = validate_paths(grid, res.paths, goals)
        if violation is not None:
            raise RuntimeError(f"LaCAM produced an invalid solution: {violation}")
        total_cost = path_total_cost(res.paths, goals)
        makespan = len(res.paths[0]) - 1
        return RunResult(summary(True, total_cost, makespan, res.elapsed_s), [], res.paths)

    budget = make_budget(step_budget_ms, budget_mode)
    mode = SolveMode.TIEBREAK if algorithm == "apibt-tb" else SolveMode.OPTIMAL
    priorities = PriorityState.default(len(starts))
    config = list(starts)
    paths = [[s] for s in starts]
    records: list[StepRecord] = []
    total_cost = 0
    plan_time_s = 0.0
    t = 0
    failure = None
    while not all(c == g for c, g in zip(config, goals)):
        if t >= max_steps:
            failure = "max-steps"
            break
        if plan_time_s > time_limit_s:
            failure = "time-limit"
            break
        t0 = time.perf_counter()
        if algorithm == "pibt":
            plan = pibt_step(grid, tables, config, priorities, seed=seed, step_key=t)
            dt = time.perf_counter() - t0
            _assert_valid_step(grid, config, plan)
            f_plan = 0
            f_lower = 0
            for i, v in enumerate(plan):
                f_plan += step_cost(config[i], v, goals[i]) + tables[i].dist[v]
                f_lower += min_fvalue(grid, tables[i], config[i])
            record = StepRecord(t, f_plan, f_plan, f_lower, 0, 0, dt * 1000.0, True)
        else:
            result = anytime_pibt(
                grid, tables, config, priorities,
                budget=budget, mode=mode, seed=seed, step_key=t,
            )
            dt = time.perf_counter() - t0
            plan = result.plan
            _assert_valid_step(grid, config, plan)
            record = StepRecord(
                t, result.f_initial, result.f_final, result.f_lowerbound,
                result.n_groups, result.n_merges, dt * 1000.0,
                result.finished_all_groups,
            )
        plan_time_s += dt
        records.append(record)
        for i, v in enumerate(plan):
            total_cost += step_cost(config[i], v, goals[i])
        config = list(plan)
        for i, v in enumerate(config):
            paths[i].append(v)
        priorities.update(config, goals)
        t += 1

    success = failure is None
    violation = validate_paths(grid, paths, goals if success else None)
    if violation is not None:
        raise RuntimeError(f"executed trajectory is invalid: {violation}")
    return RunResult(summary(success, total_cost, t, plan_time_s, failure), records, paths)


def run_single_step_study(
    instance: Instance,
    budgets_ms: list[float],
    *,
    budget_mode: str = "nodes",
    seed: int = 0,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> list[StudyRecord]:
    """Improvement study: replay every timestep at each budget.

    A full-horizon run driven by the largest budget provides the states; each
    timestep is re-solved from the identical state and seed at every budget.
    """
    if budgets_ms != sorted(budgets_ms):
        raise ValueError("budgets must be sorted ascending")
    if not budgets_ms:
        raise ValueError("need at least one budget")
    grid, tables = instance.grid, instance.tables
    goals = instance.goals
    priorities = PriorityState.default(len(instance.starts))
    config = list(instance.starts)
    records: list[StudyRecord] = []
    t = 0
    while t < max_steps and not all(c == g for c, g in zip(config, goals)):
        driving_plan = None
        for b in budgets_ms:
            result = anytime_pibt(
                grid, tables, config, priorities,
                budget=make_budget(b, budget_mode), seed=seed, step_key=t,
            )
            records.append(
                StudyRecord(t, b, result.f_initial, result.f_final, result.f_lowerbound)
            )
            driving_plan = result.plan
        _assert_valid_step(grid, config, driving_plan)
        config = list(driving_plan)
        priorities.update(config, goals)
        t += 1
    return records


def run_oracle_check(
    *,
    size: int = 8,
    agents_min: int = 2,
    agents_max: int = 6,
    trials: int = 1000,
    seed: int = 0,
    density: float = 0.2,
    budget: Budget | None = None,
) -> tuple[int, int]:
    """Optimality check: anytime f-sum against the brute-force optimum.

    Returns (matches, trials).
    """
    import random as _random

    budget = budget or Budget.nodes(1_000_000)
    rng = _random.Random(seed)
    matches = 0
    for trial in range(trials):
        n = rng.randint(agents_min, agents_max)
        grid, starts, goals = random_instance(
            seed * 7_919 + trial, size, size, density, n
        )
        tables = compute_tables(grid, goals)
        result = anytime_pibt(
            grid, tables, starts, PriorityState.default(n), budget=budget, seed=trial
        )
        optimum = brute_force_step(grid, tables, starts)
        if optimum is not None and result.f_final == optimum.fsum:
            matches += 1
    return matches, trials


def write_steps_csv(path: str | Path, records: list[StepRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["t", "f_initial", "f_final", "f_lowerbound", "groups", "merges",
             "plan_time_ms", "finished_all_groups", "schema_version"]
        )
        for r in records:
            writer.writerow(
                [r.t, r.f_initial, r.f_final, r.f_lowerbound, r.groups, r.merges,
                 f"{r.plan_time_ms:.3f}", int(r.finished_all_groups), SCHEMA_VERSION]
            )


def write_study_csv(path: str | Path, records: list[StudyRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "budget", "f_initial", "f_final", "f_lowerbound", "schema_version"])
        for r in records:
            writer.writerow(
                [r.t, r.budget, r.f_initial, r.f_final, r.f_lowerbound, SCHEMA_VERSION]
            )


def write_summary_json(path: str | Path, summary: RunSummary) -> None:
    with open(path, "w") as fh:
        json.dump(asdict(summary), fh, indent=2)
        fh.write("\n")
