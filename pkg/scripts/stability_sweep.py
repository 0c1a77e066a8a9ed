"""Fraction of diverging trials as the step size crosses the equal-q bound.

The bound 1/((q+1) lambda_max) is a factor 4 below the mean-stability limit
2 / max eig(G R) = 4/((q+1) lambda_max), so divergence sets in near 3-4x.
"""
import argparse

from qrbfnn.experiments import stability_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=float, default=2.0)
    ap.add_argument("--trials", type=int, default=100)
    args = ap.parse_args()
    print("factor  converged  diverged")
    for factor in (0.5, 0.9, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0):
        r = stability_experiment(args.q, factor, trials=args.trials)
        print(f"{factor:6.2f}  {r.n_converged:9d}  {r.n_diverged:8d}")


if __name__ == "__main__":
    main()
