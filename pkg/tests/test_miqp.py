from __future__ import annotations

import io
import random

import pytest

from heursched import (Dataset, InputError, Observation, Schedule, breakpoints,
                       build_miqp, check_assignment, check_linearized, evaluate,
                       export_miqp, schedule_assignment, solve_exact)

from conftest import random_dataset


def test_variable_family_counts(worked):
    model = build_miqp(worked, 0.5)
    assert model.family_size("x") == 3 * (3 + 1) == 12
    assert model.family_size("t") == 3
    assert model.family_size("s") == 9
    assert model.family_size("z") == 9
    assert model.family_size("f") == 9
    assert model.family_size("s_node") == 3
    assert model.family_size("p_min") == 3
    assert model.family_size("t_node") == 3


def test_node_time_upper_bound_single_pair():
    d = Dataset.from_observations([Observation("h", "N1", 1, 1)])
    model = build_miqp(d, 0.0)
    variable = model.variable("tN[N1]")
    assert (variable.lower, variable.upper) == (1, 2)  # 1 plus the total horizon


def test_empty_heuristic_set_rejected():
    with pytest.raises(InputError, match="heuristics"):
        build_miqp(Dataset((), ("N1",), ()), 0.5)


def test_never_successful_heuristic_is_forced_out(worked):
    d = Dataset.from_observations([
        Observation("good", "N1", 2, 2),
        Observation("dud", "N1", None, 9),
    ])
    model = build_miqp(d, 1.0)
    assert model.horizon["dud"] == 0
    assert model.variable("t[dud]").upper == 0
    a = schedule_assignment(model, Schedule((("good", 2),)))
    assert check_assignment(model, a).feasible


def test_worked_example_optimum_assignment(worked):
    model = build_miqp(worked, 0.5)
    a = schedule_assignment(model, Schedule((("h1", 1), ("h2", 3))))
    result = check_assignment(model, a)
    assert result.feasible
    assert result.objective == 9
    assert result.violations == ()


def test_flipping_the_solved_flag_is_caught(worked):
    model = build_miqp(worked, 0.5)
    a = schedule_assignment(model, Schedule((("h1", 1), ("h2", 3))))
    a["sN[N1]"] = 0
    result = check_assignment(model, a)
    assert not result.feasible
    assert "node_solved[N1]" in result.violations


def test_all_zero_assignment_violates_placement(worked):
    model = build_miqp(worked, 0.5)
    zeros = {v.name: 0 for v in model.variables}
    result = check_assignment(model, zeros)
    assert not result.feasible
    assert any(v.startswith("placement[") for v in result.violations)
    assert "coverage" in result.violations


def test_missing_variable_rejected(worked):
    model = build_miqp(worked, 0.5)
    a = schedule_assignment(model, Schedule((("h1", 1),)))
    del a["t[h1]"]
    with pytest.raises(InputError, match="missing"):
        check_assignment(model, a)


def test_budget_above_horizon_rejected(worked):
    model = build_miqp(worked, 0.5)
    with pytest.raises(InputError, match="horizon"):
        schedule_assignment(model, Schedule((("h1", 5),)))
    with pytest.raises(InputError, match="not part of the model"):
        schedule_assignment(model, Schedule((("h9", 1),)))


def test_domain_violations_reported(worked):
    model = build_miqp(worked, 0.5)
    a = schedule_assignment(model, Schedule((("h1", 1), ("h2", 3))))
    a["t[h1]"] = -1
    result = check_assignment(model, a)
    assert any(v.startswith("domain[") for v in result.violations)
    a["t[h1]"] = 0.5
    result = check_assignment(model, a)
    assert any(v.startswith("integrality[") for v in result.violations)


def test_render_sections_and_export(tmp_path, worked):
    model = build_miqp(worked, 0.5)
    text = model.render()
    order = [text.index(section) for section in
             ("VARIABLES", "OBJECTIVE", "LINEAR", "QUADRATIC", "COMMENTS")]
    assert order == sorted(order)
    assert "minimize:" in text
    assert "x[h1][0] binary" in text
    assert "node_time[N1]:" in text
    assert "coverage fraction: 0.5" in text

    path = tmp_path / "model.txt"
    returned = export_miqp(worked, 0.5, path)
    assert path.read_text(encoding="utf-8") == text
    buffer = io.StringIO()
    export_miqp(worked, 0.5, buffer)
    assert buffer.getvalue() == text
    assert returned.alpha == 0.5


def test_every_feasible_schedule_checks_out_both_ways(worked):
    model = build_miqp(worked, 0.5)
    candidates = [
        Schedule(),
        Schedule((("h1", 1),)),
        Schedule((("h1", 1), ("h3", 2))),
        Schedule((("h1", 1), ("h2", 3))),
        Schedule((("h3", 4), ("h2", 4), ("h1", 1))),
    ]
    for schedule in candidates:
        a = schedule_assignment(model, schedule)
        ev = evaluate(schedule, worked, 0.5)
        original = check_assignment(model, a)
        linearized = check_linearized(model, a)
        assert original.objective == ev.objective
        assert linearized.objective == ev.objective
        # coverage is the only constraint a canonical encoding can violate
        expected = () if ev.feasible else ("coverage",)
        assert original.violations == expected
        assert linearized.violations == expected


def test_linearization_never_admits_an_invalid_assignment():
    # perturb canonical assignments arbitrarily: whenever the linearized
    # model accepts, the original nonlinear constraints must accept too
    # (the converse can fail benignly: the original form does not look at
    # the auxiliary linearization variables)
    rng = random.Random(83)
    for _ in range(10):
        d = random_dataset(rng, max_heuristics=3, max_nodes=5, max_breakpoints=3)
        model = build_miqp(d, 0.5)
        usable = [h for h in d.heuristics if breakpoints(d, h)]
        entries = tuple((h, breakpoints(d, h)[-1]) for h in usable[:2])
        base = schedule_assignment(model, Schedule(entries))
        names = [v.name for v in model.variables]
        for _ in range(30):
            assignment = dict(base)
            for _ in range(rng.randint(1, 3)):
                variable = model.variable(rng.choice(names))
                assignment[variable.name] = rng.randint(variable.lower, variable.upper)
            if check_linearized(model, assignment).feasible:
                assert check_assignment(model, assignment).feasible


def test_random_optima_certified_by_both_checkers():
    rng = random.Random(79)
    checked = 0
    while checked < 25:
        d = random_dataset(rng, max_heuristics=3, max_nodes=6)
        alpha = rng.choice([0.0, 0.5])
        result = solve_exact(d, alpha)
        if result is None:
            continue
        schedule, objective = result
        model = build_miqp(d, alpha)
        a = schedule_assignment(model, schedule)
        original = check_assignment(model, a)
        linearized = check_linearized(model, a)
        assert original.feasible and linearized.feasible
        assert original.objective == objective
        assert linearized.objective == objective
        checked += 1
