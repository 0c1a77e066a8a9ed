"""Run every preset and write CSV plus summary files.

Usage: python3 scripts/run_benchmarks.py [--out results] [--trials K]
"""
import argparse
from pathlib import Path

from qrbfnn.experiments import run_experiment
from qrbfnn.presets import get_preset, preset_names
from qrbfnn.qlearn import TrainConfig
from qrbfnn.report import emit_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--trials", type=int, default=None)
    args = ap.parse_args()
    for name in preset_names():
        cfg = get_preset(name)
        if args.trials:
            cfg = cfg.replace(train=TrainConfig(cfg.train.mu, cfg.train.epochs, cfg.train.seed, args.trials))
        rep = run_experiment(cfg)
        emit_report(rep, Path(args.out) / f"{name}.csv")
        print(f"{name:<26} final {rep.final_train_mse_db:8.2f} dB  test {rep.test_mse_db:8.2f} dB  "
              f"iters {rep.iterations_to_threshold}  diverged {rep.n_diverged}  {rep.wall_clock:.1f} s")


if __name__ == "__main__":
    main()
