"""Command-line interface.

Subcommands cover the full workflow: ingest a dataset and build a greedy
schedule, evaluate or exactly optimize schedules, export the scheduling
model, simulate shadow-mode data collection, replay schedules for
incumbent timelines, compute primal metrics, compare policies and run
train/test cross-validation.

Every run that writes files also writes a JSON manifest next to its first
output recording the exact argv, inputs, outputs, seeds and tool version;
re-running the recorded argv reproduces every output byte for byte.  All
printed numbers use 6 significant digits.  Exit codes: 0 success, 1
rejected input, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import traceback
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .dataset import dump_dataset, load_dataset
from .errors import InputError
from .exact import ExactLimits, solve_exact
from .greedy import GreedyOptions, build_schedule
from .metrics import dump_timeline, gap_function, load_timeline, primal_integral
from .miqp import build_miqp
from .schedule import Schedule, dump_schedule, evaluate, load_schedule
from .simulator import (SimConfig, collect_shadow_dataset, compare_policies,
                        default_baseline, generate_instance, load_sim_config,
                        run_with_schedule)

_PROG = "heursched"


def _fmt(value) -> str:
    return format(value, ".6g")


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as rejected input (exit 1)."""

    def error(self, message):
        raise InputError(f"{message}\n{self.format_usage()}")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_output(path: str, text: str, manifest: dict) -> None:
    Path(path).write_text(text, encoding="utf-8")
    manifest_path = Path(path).with_name(Path(path).name + ".manifest.json")
    manifest_path.write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _manifest(args, command: str, inputs, outputs, seeds=(), **flags) -> dict:
    return {
        "command": command,
        "argv": list(args._argv),
        "version": __version__,
        "inputs": list(inputs),
        "outputs": list(outputs),
        "seeds": list(seeds),
        "flags": flags,
    }


def _parse_seeds(text: str) -> list[int]:
    """Either a count N (seeds 0..N-1) or a comma-separated seed list."""
    try:
        if "," in text:
            return [int(part) for part in text.split(",") if part.strip() != ""]
        return list(range(int(text)))
    except ValueError:
        raise InputError(f"cannot parse seeds from {text!r}: expected a count or a "
                         "comma-separated list") from None


def _load_config(path: str) -> SimConfig:
    cfg = load_sim_config(_read(path))
    if not cfg.name:
        cfg = SimConfig(
            heuristics=cfg.heuristics, instances=cfg.instances, nodes_min=cfg.nodes_min,
            nodes_max=cfg.nodes_max, interarrival_seconds=cfg.interarrival_seconds,
            optimum_value=cfg.optimum_value, time_limit_seconds=cfg.time_limit_seconds,
            name=Path(path).stem)
    return cfg


def _cmd_build(args) -> int:
    d = load_dataset(_read(args.data))
    opts = GreedyOptions(allow_extension=not args.no_extension,
                         normalize_costs=args.normalize,
                         alpha_report=args.alpha)
    schedule, trace, evaluation = build_schedule(d, opts)
    if trace.steps:
        print(trace.render())
    print(f"schedule length: {len(schedule)}")
    print(f"objective: {_fmt(evaluation.objective)}")
    print(f"success rate: {_fmt(evaluation.success_rate)} "
          f"({evaluation.solved_nodes}/{len(d.nodes)} nodes)")
    print(f"coverage target {_fmt(args.alpha)}: {'met' if evaluation.feasible else 'MISSED'}")
    if args.out:
        manifest = _manifest(args, "build", [args.data], [args.out],
                             alpha=args.alpha, normalize=args.normalize,
                             no_extension=args.no_extension)
        _write_output(args.out, dump_schedule(schedule), manifest)
    return 0


def _cmd_eval(args) -> int:
    d = load_dataset(_read(args.data))
    s = load_schedule(_read(args.schedule))
    evaluation = evaluate(s, d, args.alpha, normalize=args.normalize)
    print(f"objective: {_fmt(evaluation.objective)}")
    print(f"solved nodes: {evaluation.solved_nodes}/{len(d.nodes)}")
    print(f"success rate: {_fmt(evaluation.success_rate)}")
    print(f"{'FEASIBLE' if evaluation.feasible else 'INFEASIBLE'} "
          f"(alpha = {_fmt(args.alpha)})")
    return 0


def _cmd_exact(args) -> int:
    d = load_dataset(_read(args.data))
    limits = ExactLimits(max_heuristics=args.max_heuristics,
                         max_breakpoints_per_heuristic=args.max_breakpoints,
                         enumeration_budget=args.enumeration_budget)
    result = solve_exact(d, args.alpha, normalize=args.normalize, limits=limits)
    if result is None:
        print(f"INFEASIBLE (alpha = {_fmt(args.alpha)})")
        return 0
    schedule, objective = result
    print(f"optimal objective: {_fmt(objective)}")
    print(f"schedule length: {len(schedule)}")
    for position, (heuristic, budget) in enumerate(schedule.entries, start=1):
        print(f"  {position}. {heuristic} up to {budget} iterations")
    if args.out:
        manifest = _manifest(args, "exact", [args.data], [args.out],
                             alpha=args.alpha, normalize=args.normalize,
                             max_heuristics=args.max_heuristics,
                             max_breakpoints=args.max_breakpoints)
        _write_output(args.out, dump_schedule(schedule), manifest)
    return 0


def _cmd_export_miqp(args) -> int:
    d = load_dataset(_read(args.data))
    model = build_miqp(d, args.alpha)
    manifest = _manifest(args, "export-miqp", [args.data], [args.out], alpha=args.alpha)
    _write_output(args.out, model.render(), manifest)
    print(f"variables: {len(model.variables)}")
    print(f"linear constraints: {len(model.linear)}")
    print(f"quadratic constraints: {len(model.quadratic)}")
    return 0


def _cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    count = args.instances if args.instances is not None else cfg.instances
    if count < 1:
        raise InputError(f"instance count must be positive, got {count}")
    seeds = [args.seed + i for i in range(count)]
    instances = [generate_instance(cfg, seed) for seed in seeds]
    d = collect_shadow_dataset(instances)
    manifest = _manifest(args, "simulate", [args.config], [args.out], seeds=seeds,
                         instances=count)
    _write_output(args.out, dump_dataset(d), manifest)
    print(f"instances: {count}")
    print(f"heuristics: {len(d.heuristics)}")
    print(f"nodes: {len(d.nodes)}")
    print(f"observations: {len(d.observations)}")
    return 0


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    s = load_schedule(_read(args.schedule))
    limit = args.time_limit if args.time_limit is not None else cfg.effective_time_limit()
    inst = generate_instance(cfg, args.seed)
    trace = run_with_schedule(inst, s, limit)
    integral = primal_integral(trace.timeline, limit)
    print(f"nodes visited: {len(trace.nodes)}")
    print(f"incumbent events: {len(trace.timeline.events)}")
    if trace.timeline.events:
        final = trace.timeline.events[-1][1]
        print(f"final incumbent: {_fmt(final)} "
              f"(gap {_fmt(trace.timeline.gap_of(final))})")
    print(f"primal integral: {_fmt(integral)} (time limit {_fmt(limit)})")
    if args.out:
        manifest = _manifest(args, "run", [args.config, args.schedule], [args.out],
                             seeds=[args.seed], time_limit=limit)
        _write_output(args.out, dump_timeline(trace.timeline), manifest)
    return 0


def _cmd_compare(args) -> int:
    cfg = _load_config(args.config)
    s = load_schedule(_read(args.schedule))
    baseline = load_schedule(_read(args.baseline)) if args.baseline else default_baseline(cfg)
    seeds = _parse_seeds(args.seeds)
    comparison = compare_policies(cfg, seeds, s, baseline, args.time_limit)
    print(comparison.format_table())
    if args.out:
        inputs = [args.config, args.schedule] + ([args.baseline] if args.baseline else [])
        manifest = _manifest(args, "compare", inputs, [args.out], seeds=seeds,
                             time_limit=comparison.time_limit)
        _write_output(args.out, comparison.to_csv(), manifest)
    return 0


def _cmd_metrics(args) -> int:
    tl = load_timeline(_read(args.timeline), best_known=args.best_known, sense=args.sense)
    integral = primal_integral(tl, args.time_limit)
    gaps = gap_function(tl)
    print(f"incumbent events: {len(tl.events)}")
    print(f"final gap: {_fmt(gaps.breakpoints[-1][1])}")
    print(f"primal integral: {_fmt(integral)} (time limit {_fmt(args.time_limit)})")
    return 0


@dataclass(frozen=True)
class CrossvalReport:
    """Train-by-test matrix of relative primal integrals."""

    train_labels: tuple[str, ...]
    test_labels: tuple[str, ...]
    cells: dict
    baseline_label: str

    def format_table(self) -> str:
        width = max(14, *(len(label) + 2 for label in
                          self.train_labels + self.test_labels + (self.baseline_label,)))
        header = "train\\test".ljust(width) + "".join(
            label.rjust(width) for label in self.test_labels)
        lines = [header, "-" * len(header)]
        for i, train in enumerate(self.train_labels):
            row = train.ljust(width)
            for j in range(len(self.test_labels)):
                mean, std = self.cells[(i, j)]
                row += f"{mean:.2f} ± {std:.2f}".rjust(width)
            lines.append(row)
        lines.append("-" * len(header))
        row = self.baseline_label.ljust(width)
        for _ in self.test_labels:
            row += f"{1.0:.2f} ± {0.0:.2f}".rjust(width)
        lines.append(row)
        return "\n".join(lines)

    def to_csv(self) -> str:
        lines = ["train,test,mean_ratio,std_ratio"]
        for i, train in enumerate(self.train_labels):
            for j, test in enumerate(self.test_labels):
                mean, std = self.cells[(i, j)]
                lines.append(f"{train},{test},{repr(mean)},{repr(std)}")
        for test in self.test_labels:
            lines.append(f"{self.baseline_label},{test},{repr(1.0)},{repr(0.0)}")
        return "\n".join(lines) + "\n"


def run_crossval(configs, folds: int, seed: int, time_limit: float | None = None,
                 baseline: Schedule | None = None) -> CrossvalReport:
    """Train greedy schedules per configuration fold, test on every family.

    Each configuration's instances are split into ``folds`` groups; every
    group yields one shadow-mode dataset and one normalized greedy
    schedule.  Each schedule is then compared, on fresh test instances of
    every configuration, against the baseline (the test configuration's
    registration-order cap schedule unless one is supplied).  Cells
    aggregate the ratios over folds and test seeds.
    """
    configs = list(configs)
    if len(configs) < 2:
        raise InputError("cross-validation needs at least two configurations")
    if folds < 1:
        raise InputError(f"fold count must be positive, got {folds}")
    universe = configs[0].heuristic_ids()
    for cfg in configs[1:]:
        if cfg.heuristic_ids() != universe:
            raise InputError("configurations must share one heuristic universe")
    labels = []
    for index, cfg in enumerate(configs):
        labels.append(cfg.name if cfg.name else f"cfg{index + 1}")
        if folds > cfg.instances:
            raise InputError(f"fold count {folds} exceeds instance count "
                             f"{cfg.instances} of configuration {labels[-1]!r}")

    base = seed * 100_000_000
    schedules_per_config: list[list[Schedule]] = []
    for i, cfg in enumerate(configs):
        train_seeds = [base + i * 1_000_000 + k for k in range(cfg.instances)]
        chunk_size = len(train_seeds) // folds
        remainder = len(train_seeds) % folds
        schedules: list[Schedule] = []
        start = 0
        for fold in range(folds):
            size = chunk_size + (1 if fold < remainder else 0)
            chunk = train_seeds[start:start + size]
            start += size
            instances = [generate_instance(cfg, s) for s in chunk]
            fold_dataset = collect_shadow_dataset(instances)
            schedule, _, _ = build_schedule(
                fold_dataset, GreedyOptions(normalize_costs=True, alpha_report=0.0))
            schedules.append(schedule)
        schedules_per_config.append(schedules)

    cells: dict[tuple[int, int], tuple[float, float]] = {}
    for j, test_cfg in enumerate(configs):
        test_seeds = [base + j * 1_000_000 + 500_000 + k for k in range(test_cfg.instances)]
        test_baseline = baseline if baseline is not None else default_baseline(test_cfg)
        limit = time_limit if time_limit is not None else test_cfg.effective_time_limit()
        for i in range(len(configs)):
            ratios: list[float] = []
            for schedule in schedules_per_config[i]:
                comparison = compare_policies(test_cfg, test_seeds, schedule,
                                              test_baseline, limit)
                ratios.extend(row.ratio for row in comparison.rows)
            mean = statistics.fmean(ratios)
            std = statistics.stdev(ratios) if len(ratios) > 1 else 0.0
            cells[(i, j)] = (mean, std)

    baseline_label = "baseline (given)" if baseline is not None else "baseline (caps)"
    return CrossvalReport(tuple(labels), tuple(labels), cells, baseline_label)


def _cmd_crossval(args) -> int:
    paths = [part.strip() for part in args.configs.split(",") if part.strip()]
    configs = [_load_config(path) for path in paths]
    baseline = load_schedule(_read(args.baseline)) if args.baseline else None
    report = run_crossval(configs, args.folds, args.seed,
                          time_limit=args.time_limit, baseline=baseline)
    print(report.format_table())
    if args.out:
        inputs = paths + ([args.baseline] if args.baseline else [])
        manifest = _manifest(args, "crossval", inputs, [args.out], seeds=[args.seed],
                             folds=args.folds)
        _write_output(args.out, report.to_csv(), manifest)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog=_PROG, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{_PROG} {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("build", help="build a greedy schedule from a dataset")
    p.add_argument("--data", required=True, help="dataset CSV path")
    p.add_argument("--alpha", type=float, default=0.0,
                   help="coverage fraction to report against (default 0)")
    p.add_argument("--normalize", action="store_true",
                   help="weight iteration costs by average seconds per iteration")
    p.add_argument("--no-extension", action="store_true",
                   help="never raise the budget of the last scheduled heuristic")
    p.add_argument("--out", help="write the schedule CSV here")
    p.set_defaults(handler=_cmd_build)

    p = sub.add_parser("eval", help="evaluate a schedule against a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("exact", help="optimal schedule by exhaustive enumeration")
    p.add_argument("--data", required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--max-heuristics", type=int, default=ExactLimits.max_heuristics)
    p.add_argument("--max-breakpoints", type=int,
                   default=ExactLimits.max_breakpoints_per_heuristic)
    p.add_argument("--enumeration-budget", type=int, default=ExactLimits.enumeration_budget)
    p.add_argument("--out", help="write the optimal schedule CSV here")
    p.set_defaults(handler=_cmd_exact)

    p = sub.add_parser("export-miqp", help="export the scheduling model as text")
    p.add_argument("--data", required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_export_miqp)

    p = sub.add_parser("simulate", help="collect a shadow-mode dataset from the simulator")
    p.add_argument("--config", required=True, help="simulator configuration path")
    p.add_argument("--instances", type=int, default=None,
                   help="override the configuration's instance count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="write the dataset CSV here")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("run", help="replay a schedule on one simulated instance")
    p.add_argument("--config", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--out", help="write the incumbent timeline CSV here")
    p.set_defaults(handler=_cmd_run)

    p = sub.add_parser("compare", help="relative primal integral of two schedules")
    p.add_argument("--config", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--baseline", help="baseline schedule CSV "
                                      "(default: registration order at iteration caps)")
    p.add_argument("--seeds", required=True,
                   help="seed count N (uses 0..N-1) or comma-separated seed list")
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--out", help="write the per-seed comparison CSV here")
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("metrics", help="primal metrics of an incumbent timeline")
    p.add_argument("--timeline", required=True)
    p.add_argument("--best-known", type=float, required=True)
    p.add_argument("--sense", choices=("min", "max"), default="min")
    p.add_argument("--time-limit", type=float, required=True)
    p.set_defaults(handler=_cmd_metrics)

    p = sub.add_parser("crossval", help="train/test matrix over configuration families")
    p.add_argument("--configs", required=True, help="comma-separated configuration paths")
    p.add_argument("--folds", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--baseline", help="fixed baseline schedule CSV for every test family")
    p.add_argument("--out", help="write the matrix CSV here")
    p.set_defaults(handler=_cmd_crossval)
    return parser


def dispatch(argv) -> int:
    """Run one CLI invocation; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        args._argv = list(argv)
        return args.handler(args)
    except InputError as exc:
        print(f"{_PROG}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{_PROG}: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --version/--help
        return 0 if exc.code in (0, None) else 1
    except Exception:
        traceback.print_exc()
        return 2


def main(argv=None) -> None:
    raise SystemExit(dispatch(sys.argv[1:] if argv is None else argv))
