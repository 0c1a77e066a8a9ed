"""Adaptive-vs-baseline test MSE gap over network shapes and training lengths.

Shows how the Hammerstein and Mackey-Glass gaps depend on choices the
benchmark descriptions leave open (neurons, spread, epochs).
"""
import argparse
import itertools

from qrbfnn.experiments import run_experiment
from qrbfnn.presets import get_preset
from qrbfnn.qlearn import TrainConfig


def gap(task, neurons, spread, epochs, trials):
    out = []
    for name in (task, task + "-baseline"):
        cfg = get_preset(name)
        cfg = cfg.replace(neurons=neurons, spread=spread,
                          train=TrainConfig(mu=cfg.train.mu, epochs=epochs, trials=trials))
        out.append(run_experiment(cfg).test_mse_db)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("task", choices=["hammerstein", "mackey-glass"])
    ap.add_argument("--trials", type=int, default=10)
    args = ap.parse_args()
    epochs = (1, 10, 50) if args.task == "hammerstein" else (100,)
    print("neurons spread epochs  adaptive  baseline   gap")
    for n, s, e in itertools.product((6, 12, 20), (0.3, 0.5, 1.0), epochs):
        a, b = gap(args.task, n, s, e, args.trials)
        print(f"{n:7d} {s:6.2f} {e:6d}  {a:8.2f}  {b:8.2f}  {b - a:5.2f}")


if __name__ == "__main__":
    main()
