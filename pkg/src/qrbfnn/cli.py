"""Command-line entry point: ``qrbfnn run | compare | list-presets``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .experiments import ConfigError, ExperimentConfig, compare_variants, run_experiment
from .presets import PRESETS, get_preset, preset_names
from .report import emit_report, load_config


def resolve(target: str, seed: Optional[int], trials: Optional[int]) -> ExperimentConfig:
    if target in PRESETS:
        cfg = get_preset(target)
    elif Path(target).is_file():
        cfg = load_config(target)
    else:
        raise ConfigError(f"{target!r} is neither a preset nor a config file")
    if not cfg.name:
        cfg.name = Path(target).stem
    changes = {}
    if seed is not None:
        changes["seed"] = seed
    if trials is not None:
        changes["trials"] = trials
    if changes:
        from dataclasses import replace

        try:
            cfg = cfg.replace(train=replace(cfg.train, **changes))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return cfg


def _status(report) -> str:
    msg = (f"{report.config['name']}: final train {report.final_train_mse_db:.2f} dB, "
           f"test {report.test_mse_db:.2f} dB, iterations to {report.threshold_db:.2f} dB: "
           f"{report.iterations_to_threshold}")
    if report.n_diverged:
        msg += f", {report.n_diverged} diverged trials"
    return msg


def cmd_run(args) -> int:
    cfg = resolve(args.target, args.seed, args.trials)
    report = run_experiment(cfg)
    csv, summary = emit_report(report, Path(args.out) / f"{cfg.name}.csv")
    print(_status(report))
    print(f"wrote {csv} and {summary}")
    return 0


def cmd_compare(args) -> int:
    cfgs = [resolve(t, args.seed, args.trials) for t in args.targets]
    comparison = compare_variants(cfgs)
    for report in comparison.reports:
        emit_report(report, Path(args.out) / f"{report.config['name']}.csv")
    print(comparison.table())
    return 0


def cmd_list(args) -> int:
    for name in preset_names():
        cfg = get_preset(name)
        print(f"{name:<26} {cfg.experiment:<20} {cfg.variant.label}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrbfnn", description="q-gradient RBF network benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one preset or YAML config")
    run.add_argument("target", help="preset name or path to a YAML config")
    compare = sub.add_parser("compare", help="run several presets on common random numbers")
    compare.add_argument("targets", nargs="+", help="preset names or YAML configs")
    for p in (run, compare):
        p.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
        p.add_argument("--trials", type=int, default=None, help="number of Monte-Carlo trials")
        p.add_argument("--out", default="results", help="output directory (default: results)")
    run.set_defaults(func=cmd_run)
    compare.set_defaults(func=cmd_compare)
    sub.add_parser("list-presets", help="list the named presets").set_defaults(func=cmd_list)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
