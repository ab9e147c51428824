"""The brute-force single-step optimum."""
import pytest

from anytime_mapf import (
    Budget,
    PriorityState,
    anytime_pibt,
    brute_force_step,
    compute_tables,
    min_fvalue,
    pibt_step,
    random_instance,
)

from conftest import make_instance


def test_single_agent(open3x3):
    g = open3x3
    tables = compute_tables(g, [(2, 2)])
    res = brute_force_step(g, tables, [g.index((0, 0))])
    assert res.fsum == 4
    assert g.cell(res.next_cells[0]) in {(0, 1), (1, 0)}


def test_all_resting_agents_stay(open3x3):
    g = open3x3
    cells = [(0, 0), (2, 2), (0, 2)]
    idx = [g.index(c) for c in cells]
    tables = compute_tables(g, cells)
    res = brute_force_step(g, tables, idx)
    assert res.fsum == 0
    assert list(res.next_cells) == idx


def test_swap_needs_pocket_and_costs_more_than_minima():
    """Oncoming agent against a chain in a width-1 corridor with a pocket.

    Hand enumeration: the individual minima (2+2+2=6) are jointly infeasible,
    and the only f-sum-7 assignment routes the oncoming agent into the pocket
    while the chain advances.
    """
    g, starts, goals, tables = make_instance(
        ["...", "@@."], [(0, 1), (0, 2), (0, 0)], [(0, 2), (0, 0), (0, 1)]
    )
    res = brute_force_step(g, tables, starts)
    lower = sum(min_fvalue(g, t, s) for t, s in zip(tables, starts))
    assert res is not None
    assert lower == 4
    assert res.fsum == 6 > lower
    assert g.cell(res.next_cells[1]) == (1, 2)  # into the pocket
    assert g.cell(res.next_cells[0]) == (0, 2)
    assert g.cell(res.next_cells[2]) == (0, 1)


def test_prune_and_reference_paths_agree():
    for seed in range(120):
        n = 2 + seed % 5
        grid, starts, goals = random_instance(seed, 7, 7, 0.25, n)
        tables = compute_tables(grid, goals)
        fast = brute_force_step(grid, tables, starts, prune=True)
        slow = brute_force_step(grid, tables, starts, prune=False)
        assert fast == slow  # identical assignment, not just equal fsum


def test_oracle_lower_bounds_every_solver():
    for seed in range(80):
        n = 2 + seed % 5
        grid, starts, goals = random_instance(seed, 8, 8, 0.2, n)
        tables = compute_tables(grid, goals)
        ps = PriorityState.default(n)
        oracle = brute_force_step(grid, tables, starts)
        lower = sum(min_fvalue(grid, t, s) for t, s in zip(tables, starts))
        assert lower <= oracle.fsum
        plain = pibt_step(grid, tables, starts, ps, seed=seed)
        fsum_pibt = sum(
            (0 if plain[i] == starts[i] == goals[i] else 1) + tables[i].dist[plain[i]]
            for i in range(n)
        )
        assert oracle.fsum <= fsum_pibt
        for budget in (Budget.nodes(100), Budget.unbounded()):
            res = anytime_pibt(grid, tables, starts, ps, budget=budget, seed=seed)
            assert oracle.fsum <= res.f_final


def test_frozen_plans_respected(open3x3):
    g = open3x3
    starts_rc = [(1, 1), (1, 0)]
    goals_rc = [(1, 2), (1, 1)]
    starts = [g.index(c) for c in starts_rc]
    tables = compute_tables(g, goals_rc)
    # agent 1 frozen to step into agent 0's cell; 0 must clear it without swapping
    res = brute_force_step(
        g, tables, starts, subset=[0], frozen_plans={1: g.index((1, 1))}
    )
    assert res is not None
    assert g.cell(res.next_cells[1]) == (1, 1)
    assert g.cell(res.next_cells[0]) == (1, 2)


def test_infeasible_reported():
    # 1x2 corridor, frozen agent crosses into the free agent's only cells
    g, starts, goals, tables = make_instance([".."], [(0, 0), (0, 1)], [(0, 1), (0, 0)])
    res = brute_force_step(g, tables, starts, subset=[1], frozen_plans={0: g.index((0, 1))})
    assert res is None


def test_enumeration_bound_enforced():
    grid, starts, goals = random_instance(0, 10, 10, 0.1, 9)
    tables = compute_tables(grid, goals)
    with pytest.raises(ValueError):
        brute_force_step(grid, tables, starts)
