from __future__ import annotations

import random

import pytest

from heursched import (Dataset, ExactLimits, GreedyOptions, InputError, Observation,
                       Schedule, build_schedule, candidate_count, evaluate, solve_exact)

from conftest import random_dataset


def test_worked_example_full_coverage_optimum(worked):
    schedule, objective = solve_exact(worked, 0.9)
    assert schedule.entries == (("h1", 1), ("h2", 3))
    assert objective == 9
    assert solve_exact(worked, 1.0) == (schedule, 9)


def test_worked_example_partial_coverage_beats_full(worked):
    # at a coverage requirement of one half, leaving one node unsolved and
    # running the cheap pair (h1, h3) is strictly better than covering all
    # three nodes: 1 + (1+2+1) + (1+2) = 8 < 9
    schedule, objective = solve_exact(worked, 0.5)
    assert schedule.entries == (("h1", 1), ("h3", 2))
    assert objective == 8
    ev = evaluate(schedule, worked, 0.5)
    assert ev.feasible and ev.objective == 8 and ev.solved_nodes == 2


def test_worked_example_relaxed_constraint(worked):
    schedule, objective = solve_exact(worked, 0.0)
    assert objective <= 9
    assert schedule.entries == ()  # doing nothing costs 1 per node = 3
    assert objective == 3


def test_all_failures_is_infeasible():
    d = Dataset.from_observations([
        Observation("h1", "N1", None, 5),
        Observation("h1", "N2", None, 5),
    ])
    assert solve_exact(d, 0.5) is None
    assert solve_exact(d, 0.0) == (Schedule(), 2)


def test_limits_are_enforced_by_name(worked):
    with pytest.raises(InputError, match="max_heuristics"):
        solve_exact(worked, 0.5, limits=ExactLimits(max_heuristics=2))
    with pytest.raises(InputError, match="max_breakpoints_per_heuristic"):
        solve_exact(worked, 0.5,
                    limits=ExactLimits(max_breakpoints_per_heuristic=1))
    with pytest.raises(InputError, match="enumeration_budget"):
        solve_exact(worked, 0.5, limits=ExactLimits(enumeration_budget=3))


def test_candidate_count_worked_example(worked):
    # breakpoint set sizes 1, 2, 2: 1 + (1+2+2) + 2*(1*2 + 1*2 + 2*2)
    #   + 6*(1*2*2) = 1 + 5 + 16 + 24 = 46
    assert candidate_count(worked) == 46


def test_oracle_never_beaten_by_greedy():
    rng = random.Random(71)
    for _ in range(40):
        d = random_dataset(rng)
        greedy_schedule, _, greedy_ev = build_schedule(d, GreedyOptions())
        for alpha in (0.0, 0.5, 1.0):
            exact = solve_exact(d, alpha)
            if greedy_ev.success_rate >= alpha:
                assert exact is not None
                assert exact[1] <= greedy_ev.objective
            if exact is not None:
                ev = evaluate(exact[0], d, alpha)
                assert ev.feasible
                assert ev.objective == exact[1]


def test_relabeling_invariance():
    rng = random.Random(73)
    for _ in range(10):
        d = random_dataset(rng, max_heuristics=3, max_nodes=5)
        h_map = {h: f"H_{h}" for h in d.heuristics}
        n_map = {n: f"N_{n}" for n in d.nodes}
        relabeled = Dataset(
            tuple(h_map[h] for h in d.heuristics),
            tuple(n_map[n] for n in d.nodes),
            tuple(Observation(h_map[o.heuristic], n_map[o.node], o.iterations_to_solution,
                              o.iterations_executed, o.duration_seconds)
                  for o in d.observations))
        for alpha in (0.0, 0.5):
            first = solve_exact(d, alpha)
            second = solve_exact(relabeled, alpha)
            if first is None:
                assert second is None
                continue
            assert second is not None
            assert first[1] == second[1]
            assert tuple((h_map[h], b) for h, b in first[0].entries) == second[0].entries
