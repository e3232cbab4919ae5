"""Exhaustive search for an optimal schedule at small scale.

Enumerates every ordered selection of heuristics with every combination of
observed iteration budgets (plus the empty schedule), replays each
candidate against the dataset, and keeps the cheapest one meeting the
coverage requirement.  The scheduling problem generalizes pipelined set
cover and is NP-hard, so this is strictly a desk-scale ground truth: hard
limits guard the factorially growing candidate space.

Ties on the objective are broken deterministically: fewer entries first,
then heuristic registration order, then smaller budgets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .dataset import Dataset, IterationCostProfile, breakpoints
from .errors import InputError
from .schedule import Schedule, replay_node, replay_tables


@dataclass(frozen=True)
class ExactLimits:
    """Bounds on the enumeration; exceeding any of them is an error."""

    max_heuristics: int = 6
    max_breakpoints_per_heuristic: int = 8
    enumeration_budget: int = 2_000_000

    def __post_init__(self) -> None:
        for name in ("max_heuristics", "max_breakpoints_per_heuristic", "enumeration_budget"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be positive")


def candidate_count(d: Dataset) -> int:
    """Number of schedules the exhaustive search would visit."""
    sizes = [len(breakpoints(d, h)) for h in d.heuristics]
    sizes = [s for s in sizes if s > 0]
    total = 1  # the empty schedule
    for k in range(1, len(sizes) + 1):
        for combo in itertools.combinations(sizes, k):
            total += math.factorial(k) * math.prod(combo)
    return total


def solve_exact(d: Dataset, alpha: float,
                costs: IterationCostProfile | None = None,
                normalize: bool = False,
                limits: ExactLimits = ExactLimits()):
    """Optimal schedule by enumeration, or None when no schedule reaches alpha.

    Heuristics that never succeed are skipped: they can only add cost.
    Costs use the same units as schedule evaluation (normalization
    optional), so greedy and exact objectives are directly comparable.
    """
    if not 0.0 <= alpha <= 1.0:
        raise InputError(f"alpha must lie in [0, 1], got {alpha!r}")
    if len(d.heuristics) > limits.max_heuristics:
        raise InputError(f"heuristic count {len(d.heuristics)} exceeds "
                         f"max_heuristics={limits.max_heuristics}")
    budgets_of = {h: breakpoints(d, h) for h in d.heuristics}
    for heuristic, budgets in budgets_of.items():
        if len(budgets) > limits.max_breakpoints_per_heuristic:
            raise InputError(
                f"heuristic {heuristic!r} has {len(budgets)} observed budgets, exceeding "
                f"max_breakpoints_per_heuristic={limits.max_breakpoints_per_heuristic}")
    count = candidate_count(d)
    if count > limits.enumeration_budget:
        raise InputError(f"candidate schedule count {count} exceeds "
                         f"enumeration_budget={limits.enumeration_budget}")

    usable = [h for h in d.heuristics if budgets_of[h]]
    registration = {h: i for i, h in enumerate(d.heuristics)}
    tables = replay_tables(d, costs, normalize)
    nodes = d.nodes
    total_nodes = len(nodes)

    best_key = None
    best_entries = None
    best_objective = None

    def consider(entries) -> None:
        nonlocal best_key, best_entries, best_objective
        objective = 0
        solved = 0
        for node in nodes:
            position, cost = replay_node(entries, tables, node)
            objective += cost
            if position is not None:
                solved += 1
        rate = solved / total_nodes if total_nodes else 1.0
        if rate < alpha:
            return
        key = (objective, len(entries),
               tuple(registration[h] for h, _ in entries),
               tuple(b for _, b in entries))
        if best_key is None or key < best_key:
            best_key = key
            best_entries = entries
            best_objective = objective

    consider(())
    for k in range(1, len(usable) + 1):
        for combo in itertools.combinations(usable, k):
            for perm in itertools.permutations(combo):
                for budgets in itertools.product(*(budgets_of[h] for h in perm)):
                    consider(tuple(zip(perm, budgets)))

    if best_entries is None:
        return None
    return Schedule(best_entries), best_objective
