"""Training MSE floors of the MIMO and system-ID presets across input SNRs."""
import argparse

from qrbfnn.experiments import run_experiment
from qrbfnn.presets import get_preset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=100)
    args = ap.parse_args()
    print("task       snr_db  adaptive  baseline  iters(adaptive/baseline)")
    for task in ("system-id", "mimo"):
        for snr in (0.0, 10.0, 13.0, 20.0, 30.0):
            reps = []
            for name in (task, task + "-baseline"):
                cfg = get_preset(name)
                cfg = cfg.replace(task={"train_snr_db": snr},
                                  train=cfg.train.__class__(cfg.train.mu, cfg.train.epochs, 0, args.trials))
                reps.append(run_experiment(cfg))
            a, b = reps
            print(f"{task:<10} {snr:6.1f}  {a.final_train_mse_db:8.2f}  {b.final_train_mse_db:8.2f}  "
                  f"{a.iterations_to_threshold}/{b.iterations_to_threshold}")


if __name__ == "__main__":
    main()
