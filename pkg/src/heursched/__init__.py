"""Data-driven schedules of branch-and-bound primal heuristics.

Learns, from per-node heuristic performance data, an ordered list of
(heuristic, iteration budget) pairs that finds feasible solutions at many
search nodes at low cost; validates the result against an exhaustive
oracle and an exportable mixed-integer quadratic model; measures primal
performance through gap/integral metrics; and ships a synthetic
branch-and-bound simulator for shadow-mode data collection and replay.
"""

__version__ = "0.1.0"

from .dataset import (Dataset, IterationCostProfile, Observation, avg_iteration_cost,
                      breakpoints, dump_dataset, load_dataset)
from .errors import InputError
from .exact import ExactLimits, candidate_count, solve_exact
from .greedy import GreedyOptions, GreedyStep, GreedyTrace, best_action, build_schedule
from .metrics import (GapFunction, IncumbentTimeline, dump_timeline, gap_function,
                      load_timeline, primal_gap, primal_integral)
from .miqp import (CheckResult, MiqpModel, build_miqp, check_assignment,
                   check_linearized, export_miqp, schedule_assignment)
from .schedule import (NodeOutcome, Schedule, ScheduleEvaluation, dump_schedule,
                       evaluate, load_schedule, node_cost)
from .simulator import (HeuristicSpec, LatentOutcome, PolicyComparison, RunTrace,
                        SimConfig, SimInstance, collect_shadow_dataset,
                        compare_policies, default_baseline, generate_instance,
                        load_sim_config, run_with_schedule)

__all__ = [
    "Dataset", "IterationCostProfile", "Observation", "avg_iteration_cost",
    "breakpoints", "dump_dataset", "load_dataset",
    "InputError",
    "ExactLimits", "candidate_count", "solve_exact",
    "GreedyOptions", "GreedyStep", "GreedyTrace", "best_action", "build_schedule",
    "GapFunction", "IncumbentTimeline", "dump_timeline", "gap_function",
    "load_timeline", "primal_gap", "primal_integral",
    "CheckResult", "MiqpModel", "build_miqp", "check_assignment",
    "check_linearized", "export_miqp", "schedule_assignment",
    "NodeOutcome", "Schedule", "ScheduleEvaluation", "dump_schedule",
    "evaluate", "load_schedule", "node_cost",
    "HeuristicSpec", "LatentOutcome", "PolicyComparison", "RunTrace",
    "SimConfig", "SimInstance", "collect_shadow_dataset", "compare_policies",
    "default_baseline", "generate_instance", "load_sim_config", "run_with_schedule",
    "__version__",
]
