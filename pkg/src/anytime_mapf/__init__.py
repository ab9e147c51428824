"""Grid MAPF toolkit: PIBT, anytime single-step refinement, LaCAM, benchmarks."""

from .anytime import (
    AnytimeResult,
    Budget,
    GroupSolveResult,
    NodeDeadline,
    SolveMode,
    WallDeadline,
    anytime_pibt,
    anytime_pibt_r,
    tiebreak_candidates,
)
from .grid import (
    Cell,
    GridMap,
    MapFormatError,
    ScenarioEntry,
    parse_map,
    parse_scenario,
)
from .groups import (
    Group,
    GroupQueue,
    GroupSet,
    extract_groups,
    remove_not_disjoint_with,
    time_per_group,
)
from .heuristics import (
    UNREACHABLE,
    HeuristicTable,
    compute_table,
    compute_tables,
    fvalue,
    min_fvalue,
    plan_fsum,
    step_cost,
)
from .lacam import Generator, LacamResult, lacam_solve, make_generator
from .mapgen import (
    cave_grid,
    generate_scenario,
    random_grid,
    random_instance,
    scenario_text,
)
from .oracle import JointAssignment, brute_force_step
from .pibt import PriorityState, pibt_step, sorted_candidates
from .runner import (
    ALGORITHMS,
    NODES_PER_MS,
    SCHEMA_VERSION,
    Instance,
    InstanceError,
    RunResult,
    RunSummary,
    StepRecord,
    StudyRecord,
    Violation,
    build_instance,
    load_instance,
    make_budget,
    path_total_cost,
    run_full_horizon,
    run_oracle_check,
    run_single_step_study,
    validate_paths,
    write_steps_csv,
    write_study_csv,
    write_summary_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
