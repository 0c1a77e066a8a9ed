"""Seeded Monte-Carlo runner for the benchmark experiments."""
from __future__ import annotations

import copy
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional

import numpy as np

from .adaptive import AdaptiveQState
from .analysis import estimate_correlations, mean_error_recursion, system_matrix
from .network import Gaussian, activation_matrix
from .plants import (HammersteinPlant, MackeyGlassSeries, MimoPlant, NonlinearPlant, awgn, kmeans_centers,
                     mackey_glass_series, rectangular_signal, tapped_delay)
from .qlearn import QGain, TrainConfig, online_pass

EXPERIMENTS = ("sensitivity", "analysis-validation", "system-id", "hammerstein", "mimo", "mackey-glass",
               "classification")
VARIANTS = ("baseline", "fixed", "adaptive")

NoiseHook = Callable[[int, str, np.ndarray], None]


class ConfigError(ValueError):
    pass


@dataclass
class Variant:
    """Training algorithm: ``baseline`` (q = 1), ``fixed`` q or ``adaptive`` q."""

    kind: str = "baseline"
    q: float = 1.0
    q0: float = 1.0
    beta: float = 0.9
    gamma: float = 5.0
    q_max: Optional[float] = 5.0

    def __post_init__(self):
        if self.kind not in VARIANTS:
            raise ConfigError(f"unknown variant {self.kind!r}; expected one of {VARIANTS}")

    def schedule(self, n_neurons: int):
        if self.kind == "baseline":
            return QGain.uniform(n_neurons, 1.0, 1.0)
        if self.kind == "fixed":
            q = np.broadcast_to(np.asarray(self.q, dtype=float), (n_neurons,))
            return QGain(q.copy(), self.q0)
        return AdaptiveQState(q=1.0, beta=self.beta, gamma=self.gamma, q_cap=self.q_max)

    @property
    def label(self) -> str:
        if self.kind == "baseline":
            return "baseline q=1"
        if self.kind == "fixed":
            return f"fixed q={self.q:g}" if np.ndim(self.q) == 0 else f"fixed q={list(self.q)}"
        return f"adaptive beta={self.beta:g} gamma={self.gamma:g} q_max={self.q_max}"


@dataclass
class ExperimentConfig:
    experiment: str
    variant: Variant = field(default_factory=Variant)
    neurons: int = 6
    spread: float = 1.0
    train: TrainConfig = field(default_factory=lambda: TrainConfig(mu=1e-2))
    task: Dict[str, object] = field(default_factory=dict)
    threshold_db: Optional[float] = None
    threshold_tolerance_db: float = 0.5
    smooth: int = 10
    name: str = ""

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENTS}")
        if self.neurons < 1:
            raise ConfigError("neurons must be >= 1")
        if not self.spread > 0:
            raise ConfigError("spread must be positive")
        if self.smooth < 1:
            raise ConfigError("smooth must be >= 1")
        unknown = set(self.task) - set(TASK_DEFAULTS[self.experiment])
        if unknown:
            raise ConfigError(f"unknown task settings for {self.experiment}: {sorted(unknown)}")
        if self.experiment == "analysis-validation" and self.variant.kind == "adaptive":
            raise ConfigError("analysis-validation needs a fixed q schedule")

    def task_settings(self) -> dict:
        return {**TASK_DEFAULTS[self.experiment], **self.task}

    def to_dict(self) -> dict:
        out = asdict(self)
        out["task"] = self.task_settings()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        known = {"experiment", "variant", "neurons", "spread", "train", "task", "threshold_db",
                 "threshold_tolerance_db", "smooth", "name"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "experiment" not in data:
            raise ConfigError("config needs an 'experiment' key")
        try:
            variant = Variant(**(data.pop("variant", None) or {}))
            train = TrainConfig(**(data.pop("train", None) or {"mu": 1e-2}))
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return cls(variant=variant, train=train, **data)

    def replace(self, **changes) -> "ExperimentConfig":
        cfg = copy.deepcopy(self)
        for key, value in changes.items():
            setattr(cfg, key, value)
        cfg.__post_init__()
        return cfg


TASK_DEFAULTS: Dict[str, dict] = {
    "classification": {"samples": 100, "means": [0.25, 0.75], "std": 0.1, "snr_db": 20.0, "test_samples": 100},
    "sensitivity": {"samples": 100, "means": [0.25, 0.75], "std": 0.1, "snr_db": 20.0, "test_samples": 100},
    "analysis-validation": {"samples": 100, "means": [0.25, 0.75], "std": 0.1, "snr_db": float("inf"),
                            "test_samples": 100},
    "system-id": {"samples_per_half": 250, "periods": 2, "train_snr_db": 20.0, "test_samples_per_half": 100,
                  "test_periods": 5, "test_snr_db": 40.0, "output_noise_std": 0.0,
                  "a": [2.0, -0.5, -0.1, -0.7, 3.0]},
    "mimo": {"samples_per_half": 250, "periods": 2, "train_snr_db": 20.0, "test_samples_per_half": 100,
             "test_periods": 5, "test_snr_db": 40.0, "m": [0.21, -0.12, 0.3, -0.6, 0.5],
             "n": [0.25, -0.1, -0.2, 1.2, 0.2]},
    "hammerstein": {"start": -2.0, "stop": 2.0, "samples": 201, "disturbance_std": 0.1,
                    "m": [31.549, 41.732, 24.201, 68.634], "n": [0.4, 0.35, 0.15]},
    "mackey-glass": {"length": 3000, "tau": 20, "n_coef": 0.2, "m_coef": 0.1, "r0": 1.2, "train_start": 100,
                     "train_stop": 2500, "test_stop": 3000, "snr_db": 30.0, "taps": 3},
}


# -- tasks --------------------------------------------------------------------------------------


class TrialContext:
    """Random source for one trial; every noise draw is reported to the optional hook."""

    def __init__(self, seed: int, trial: int, hook: Optional[NoiseHook] = None):
        self.trial = trial
        self.rng = np.random.default_rng([seed, trial])
        self.hook = hook

    def noise(self, name: str, signal, snr_db: float) -> np.ndarray:
        v = awgn(signal, snr_db, self.rng)
        if self.hook is not None:
            self.hook(self.trial, name, v)
        return v

    def gauss(self, name: str, size: int, std: float) -> np.ndarray:
        v = self.rng.normal(0.0, std, size) if std > 0 else np.zeros(size)
        if self.hook is not None:
            self.hook(self.trial, name, v)
        return v


@dataclass
class TaskData:
    train_inputs: np.ndarray  # (T, M)
    train_desired: np.ndarray  # (T, K)
    test_inputs: np.ndarray
    test_desired: np.ndarray
    centers: np.ndarray
    optimal_weights: Optional[np.ndarray] = None  # (N,) teacher weights when known


def _clusters(ctx: TrialContext, n: int, means, std):
    labels = ctx.rng.integers(0, len(means), n)
    return (np.asarray(means, dtype=float)[labels] + std * ctx.rng.standard_normal(n))[:, None]


def _teacher_weights(n: int) -> np.ndarray:
    return np.linspace(-1.0, 1.0, n) if n > 1 else np.ones(1)


def two_cluster_task(cfg: ExperimentConfig, ctx: TrialContext) -> TaskData:
    """Inputs from two Gaussian clusters; the class signal is a signed RBF teacher.

    The teacher uses the k-means centers and weights spaced on [-1, 1]
    (``-1`` for the lower cluster, ``+1`` for the upper one with two neurons),
    scaled so the clean signal has unit power on the training inputs.
    """
    s = cfg.task_settings()
    kernel = Gaussian(cfg.spread)
    x = _clusters(ctx, int(s["samples"]), s["means"], s["std"])
    centers = kmeans_centers(x, cfg.neurons, seed=ctx.rng)
    raw = activation_matrix(centers, kernel, x) @ _teacher_weights(cfg.neurons)
    w_opt = _teacher_weights(cfg.neurons) / np.sqrt(np.mean(raw**2))
    clean = activation_matrix(centers, kernel, x) @ w_opt
    d = clean + ctx.noise("desired", clean, float(s["snr_db"]))
    x_test = _clusters(ctx, int(s["test_samples"]), s["means"], s["std"])
    d_test = activation_matrix(centers, kernel, x_test) @ w_opt
    return TaskData(x, d[:, None], x_test, d_test[:, None], centers, w_opt)


def system_id_task(cfg: ExperimentConfig, ctx: TrialContext) -> TaskData:
    s = cfg.task_settings()
    rect = rectangular_signal(int(s["samples_per_half"]), int(s["periods"]))
    r = rect + ctx.noise("train_input", rect, float(s["train_snr_db"]))
    n_out = ctx.gauss("plant_noise", r.size, float(s["output_noise_std"]))
    d = NonlinearPlant(tuple(s["a"])).simulate(r, n_out)
    X = tapped_delay(r, 3)
    rect_t = rectangular_signal(int(s["test_samples_per_half"]), int(s["test_periods"]))
    r_t = rect_t + ctx.noise("test_input", rect_t, float(s["test_snr_db"]))
    d_t = NonlinearPlant(tuple(s["a"])).simulate(r_t)
    centers = kmeans_centers(X, cfg.neurons, seed=ctx.rng)
    return TaskData(X, d[:, None], tapped_delay(r_t, 3), d_t[:, None], centers)


def mimo_task(cfg: ExperimentConfig, ctx: TrialContext) -> TaskData:
    """Both plant inputs receive the same noisy rectangular stream."""
    s = cfg.task_settings()
    m, n = tuple(s["m"]), tuple(s["n"])
    rect = rectangular_signal(int(s["samples_per_half"]), int(s["periods"]))
    r = rect + ctx.noise("train_input", rect, float(s["train_snr_db"]))
    D = MimoPlant(m, n).simulate(r, r)
    X = np.hstack([tapped_delay(r, 3), tapped_delay(r, 3)])
    rect_t = rectangular_signal(int(s["test_samples_per_half"]), int(s["test_periods"]))
    r_t = rect_t + ctx.noise("test_input", rect_t, float(s["test_snr_db"]))
    D_t = MimoPlant(m, n).simulate(r_t, r_t)
    X_t = np.hstack([tapped_delay(r_t, 3), tapped_delay(r_t, 3)])
    centers = kmeans_centers(X, cfg.neurons, seed=ctx.rng)
    return TaskData(X, D, X_t, D_t, centers)


def hammerstein_task(cfg: ExperimentConfig, ctx: TrialContext) -> TaskData:
    """Ramp input; training and test runs see independent disturbance draws."""
    s = cfg.task_settings()
    r = np.linspace(float(s["start"]), float(s["stop"]), int(s["samples"]))
    m, n = tuple(s["m"]), tuple(s["n"])
    std = float(s["disturbance_std"])
    d = HammersteinPlant(m, n, std).simulate(r, ctx.gauss("train_disturbance", r.size, std))
    d_t = HammersteinPlant(m, n, std).simulate(r, ctx.gauss("test_disturbance", r.size, std))
    X = tapped_delay(r, 3)
    centers = kmeans_centers(X, cfg.neurons, seed=ctx.rng)
    return TaskData(X, d[:, None], X, d_t[:, None], centers)


@lru_cache(maxsize=8)
def _mackey_glass(length, tau, n_coef, m_coef, r0):
    series = mackey_glass_series(MackeyGlassSeries(n_coef, m_coef, tau, length, r0))
    series.setflags(write=False)
    return series


def mackey_glass_task(cfg: ExperimentConfig, ctx: TrialContext) -> TaskData:
    """One-step prediction of r(t) from the previous ``taps`` samples.

    ``series[i]`` is r(i + 1). Training pairs have targets r(t) for
    train_start <= t < train_stop and are built from the noisy series; test
    pairs cover train_stop <= t <= test_stop on the clean series.
    """
    s = cfg.task_settings()
    series = _mackey_glass(int(s["length"]), int(s["tau"]), float(s["n_coef"]), float(s["m_coef"]),
                           float(s["r0"]))
    taps = int(s["taps"])
    lo, mid, hi = int(s["train_start"]), int(s["train_stop"]), int(s["test_stop"])
    train = series[: mid - 1]
    noisy = train + ctx.noise("series", train, float(s["snr_db"]))
    X_all = tapped_delay(noisy, taps, delay=1)
    X = X_all[lo - 1: mid - 1]
    d = noisy[lo - 1: mid - 1]
    X_t = tapped_delay(series, taps, delay=1)[mid - 1: hi]
    d_t = series[mid - 1: hi]
    centers = kmeans_centers(X, cfg.neurons, seed=ctx.rng)
    return TaskData(X, d[:, None], X_t, d_t[:, None], centers)


TASKS = {
    "classification": two_cluster_task,
    "sensitivity": two_cluster_task,
    "analysis-validation": two_cluster_task,
    "system-id": system_id_task,
    "mimo": mimo_task,
    "hammerstein": hammerstein_task,
    "mackey-glass": mackey_glass_task,
}


# -- metrics ------------------------------------------------------------------------------------


def to_db(x):
    with np.errstate(divide="ignore", invalid="ignore"):
        return 10.0 * np.log10(x)


def smoothed(curve, window: int) -> np.ndarray:
    """Trailing moving average; entry n averages samples max(0, n-window+1)..n."""
    c = np.asarray(curve, dtype=float)
    csum = np.cumsum(np.r_[0.0, c])
    n = np.arange(1, c.size + 1)
    start = np.maximum(n - window, 0)
    with np.errstate(invalid="ignore"):
        return (csum[n] - csum[start]) / (n - start)


def steady_state(curve, fraction: float = 0.1) -> float:
    """Mean of the last ``fraction`` of a linear-scale MSE curve."""
    c = np.asarray(curve, dtype=float)
    k = max(1, int(round(c.size * fraction)))
    return float(np.mean(c[-k:]))


def iterations_to_threshold(curve, threshold_db: float, window: int = 10) -> Optional[int]:
    """Number of updates until the smoothed MSE first drops to ``threshold_db``."""
    sm = to_db(smoothed(curve, window))
    hit = np.nonzero(sm <= threshold_db)[0]
    return int(hit[0]) + 1 if hit.size else None


# -- runner -------------------------------------------------------------------------------------


@dataclass
class RunReport:
    config: dict
    mse: np.ndarray  # trial-mean squared error per update
    mean_q: np.ndarray
    final_train_mse_db: float
    test_mse_db: float
    threshold_db: float
    iterations_to_threshold: Optional[int]
    trial_seeds: List[list]
    diverged: np.ndarray  # per trial
    clamp_violations: int
    epoch_mse: np.ndarray  # (trials, epochs), per-trial mean squared error of each epoch
    test_mse: np.ndarray  # per trial
    wall_clock: float = 0.0
    extra_columns: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def mse_db(self) -> np.ndarray:
        return to_db(self.mse)

    @property
    def n_diverged(self) -> int:
        return int(np.count_nonzero(self.diverged))

    def summary(self) -> dict:
        return {
            "name": self.config.get("name", ""),
            "experiment": self.config["experiment"],
            "iterations": int(self.mse.size),
            "final_train_mse_db": self.final_train_mse_db,
            "test_mse_db": self.test_mse_db,
            "threshold_db": self.threshold_db,
            "iterations_to_threshold": self.iterations_to_threshold,
            "trials": len(self.trial_seeds),
            "diverged_trials": self.n_diverged,
            "clamp_violations": self.clamp_violations,
            "final_mean_q": float(self.mean_q[-1]) if self.mean_q.size else None,
            "wall_clock_s": self.wall_clock,
            "trial_seeds": self.trial_seeds,
            "config": self.config,
        }


def build_trials(cfg: ExperimentConfig, noise_hook: Optional[NoiseHook] = None) -> List[TaskData]:
    task = TASKS[cfg.experiment]
    return [task(cfg, TrialContext(cfg.train.seed, k, noise_hook)) for k in range(cfg.train.trials)]


def run_experiment(cfg: ExperimentConfig, noise_hook: Optional[NoiseHook] = None,
                   trials: Optional[List[TaskData]] = None) -> RunReport:
    """Train ``cfg.train.trials`` independent networks and average their curves.

    Trial k draws all its randomness from ``default_rng([seed, k])``, so two
    configs with the same seed see identical data and noise whatever their
    variant. All trials advance in lockstep as one batch.
    """
    t0 = time.perf_counter()
    if trials is None:
        trials = build_trials(cfg, noise_hook)
    K = len(trials)
    kernel = Gaussian(cfg.spread)
    outputs = trials[0].train_desired.shape[1]
    T = trials[0].train_desired.shape[0]

    # one single-output network per (trial, output)
    phi = np.stack([activation_matrix(t.centers, kernel, t.train_inputs) for t in trials])
    phi = np.repeat(phi, outputs, axis=0)
    desired = np.concatenate([t.train_desired.T for t in trials])
    B = K * outputs
    N = phi.shape[2]
    w = np.zeros((B, N))
    b = np.zeros(B)
    schedule = cfg.variant.schedule(N)
    E = cfg.train.epochs

    mse = np.empty(E * T)
    mean_q = np.empty(E * T)
    epoch_mse = np.full((B, E), np.nan)
    active = np.ones(B, dtype=bool)
    diverged = np.zeros(B, dtype=bool)
    violations = 0

    validating = cfg.experiment == "analysis-validation"
    if validating:
        w_opt = np.repeat(np.stack([t.optimal_weights for t in trials]), outputs, axis=0)
        mae_sim = np.empty(E * T)

    shuffle_rng = np.random.default_rng([cfg.train.seed, K, 1])
    for ep in range(E):
        order = None
        if cfg.train.shuffle:
            order = np.stack([shuffle_rng.permutation(T) for _ in range(B)])
        res = online_pass(phi, desired, w, b, cfg.train.mu, schedule, order, active=active,
                          record_weights=validating)
        w, b, schedule = res.weights, res.bias, res.schedule
        diverged |= res.diverged
        active &= ~res.diverged
        violations += res.clamp_violations
        sq = res.sq_errors
        sl = slice(ep * T, (ep + 1) * T)
        with np.errstate(invalid="ignore"):
            keep = ~np.all(np.isnan(sq), axis=0)
            mse[sl] = np.nan
            mse[sl][keep] = np.nanmean(sq[:, keep], axis=0)
            epoch_mse[:, ep] = np.where(np.isnan(sq).any(axis=1), np.nan, sq.mean(axis=1))
        mean_q[sl] = res.q_trace.mean(axis=0)
        if validating:
            mae_sim[sl] = np.abs(res.weight_trace - w_opt[:, None, :]).mean(axis=2).mean(axis=0)

    phi_t = np.repeat(np.stack([activation_matrix(t.centers, kernel, t.test_inputs) for t in trials]),
                      outputs, axis=0)
    d_t = np.concatenate([t.test_desired.T for t in trials])
    with np.errstate(over="ignore", invalid="ignore"):
        pred = np.einsum("btn,bn->bt", phi_t, w) + b[:, None]
        test_mse_b = np.mean((d_t - pred) ** 2, axis=1)
    test_mse = test_mse_b.reshape(K, outputs).mean(axis=1)
    trial_div = diverged.reshape(K, outputs).any(axis=1)
    ok = ~trial_div
    test_mse_db = float(to_db(test_mse[ok].mean())) if ok.any() else float("nan")

    final_db = float(to_db(steady_state(mse)))
    threshold = cfg.threshold_db if cfg.threshold_db is not None else final_db + cfg.threshold_tolerance_db
    extra = {}
    if validating:
        extra["mae_simulated"] = mae_sim
        extra["mae_analytic"] = _analytic_mae(trials, cfg, E * T)

    return RunReport(
        config=cfg.to_dict(),
        mse=mse,
        mean_q=mean_q,
        final_train_mse_db=final_db,
        test_mse_db=test_mse_db,
        threshold_db=float(threshold),
        iterations_to_threshold=iterations_to_threshold(mse, threshold, cfg.smooth),
        trial_seeds=[[cfg.train.seed, k] for k in range(K)],
        diverged=trial_div,
        clamp_violations=violations,
        epoch_mse=epoch_mse.reshape(K, outputs, E).mean(axis=1),
        test_mse=test_mse,
        wall_clock=time.perf_counter() - t0,
        extra_columns=extra,
    )


def _analytic_mae(trials: List[TaskData], cfg: ExperimentConfig, horizon: int) -> np.ndarray:
    """Trial-mean of the predicted weight MAE after 1..horizon updates.

    The bias is treated as a weight on a constant unit activation, so the
    recursion covers the full parameter vector; only the weights enter the MAE.
    """
    kernel = Gaussian(cfg.spread)
    schedule = cfg.variant.schedule(cfg.neurons)
    gains = np.r_[schedule.gains, schedule.bias_gain]
    total = np.zeros(horizon)
    for t in trials:
        phi = activation_matrix(t.centers, kernel, t.train_inputs)
        aug = np.hstack([phi, np.ones((phi.shape[0], 1))])
        stats = estimate_correlations(aug, t.train_desired[:, 0])
        A = system_matrix(gains, stats.R)
        delta0 = np.r_[-t.optimal_weights, 0.0]
        trace = mean_error_recursion(A, cfg.train.mu, delta0, horizon)
        total += np.abs(trace.deltas[1:, : cfg.neurons]).mean(axis=1)
    return total / len(trials)


@dataclass
class Comparison:
    reports: List[RunReport]

    def rows(self) -> List[dict]:
        return [
            {
                "name": r.config.get("name") or r.config["variant"]["kind"],
                "variant": Variant(**r.config["variant"]).label,
                "final_train_mse_db": r.final_train_mse_db,
                "test_mse_db": r.test_mse_db,
                "threshold_db": r.threshold_db,
                "iterations_to_threshold": r.iterations_to_threshold,
                "diverged_trials": r.n_diverged,
            }
            for r in self.reports
        ]

    def table(self) -> str:
        rows = self.rows()
        head = f"{'name':<28} {'final dB':>9} {'test dB':>9} {'thr dB':>8} {'iters':>7} {'div':>4}"
        lines = [head]
        for r in rows:
            iters = "-" if r["iterations_to_threshold"] is None else str(r["iterations_to_threshold"])
            lines.append(f"{r['name']:<28} {r['final_train_mse_db']:>9.2f} {r['test_mse_db']:>9.2f} "
                         f"{r['threshold_db']:>8.2f} {iters:>7} {r['diverged_trials']:>4}")
        return "\n".join(lines)


def compare_variants(cfgs: List[ExperimentConfig], noise_hook: Optional[NoiseHook] = None) -> Comparison:
    """Run configs that differ only in training settings on common random numbers."""
    if not cfgs:
        raise ConfigError("nothing to compare")
    first = cfgs[0]
    for c in cfgs[1:]:
        if c.experiment != first.experiment:
            raise ConfigError(f"cannot compare {first.experiment!r} with {c.experiment!r}")
        if (c.train.seed, c.train.trials) != (first.train.seed, first.train.trials):
            raise ConfigError("compared configs must share seed and trial count")
    return Comparison([run_experiment(c, noise_hook) for c in cfgs])


# -- step-size stability ------------------------------------------------------------------------


@dataclass
class StabilityReport:
    factor: float
    q: float
    step_sizes: np.ndarray  # per trial
    bounds: np.ndarray  # equal-q bound per trial
    diverged: np.ndarray  # per trial

    @property
    def n_converged(self) -> int:
        return int(np.count_nonzero(~self.diverged))

    @property
    def n_diverged(self) -> int:
        return int(np.count_nonzero(self.diverged))


def stability_experiment(q: float, factor: float, trials: int = 100, epochs: int = 200, seed: int = 0,
                         growth: float = 10.0) -> StabilityReport:
    """Train on the noiseless two-cluster task with ``mu = factor * bound``.

    The bound is the equal-q value ``1 / ((q + 1) lambda_max)``, where
    ``lambda_max`` is the largest eigenvalue of the sample correlation matrix
    of the bias-augmented activations, so the bias (trained with the same q)
    is covered as well. A trial counts as diverged when its weights become
    non-finite or its last-epoch MSE exceeds ``growth`` times the first.
    """
    from .analysis import stability_bounds

    cfg = ExperimentConfig("analysis-validation", Variant("fixed", q=q, q0=q), neurons=2, spread=0.1,
                           train=TrainConfig(mu=1.0, epochs=epochs, seed=seed, trials=trials))
    data = build_trials(cfg)
    kernel = Gaussian(cfg.spread)
    phi = np.stack([activation_matrix(t.centers, kernel, t.train_inputs) for t in data])
    desired = np.stack([t.train_desired[:, 0] for t in data])
    bounds = np.empty(trials)
    for k in range(trials):
        aug = np.hstack([phi[k], np.ones((phi.shape[1], 1))])
        lam = np.linalg.eigvalsh(estimate_correlations(aug, desired[k]).R)
        bounds[k] = stability_bounds(q, lam).equal_q
    mu = factor * bounds
    B = trials
    w, b = np.zeros((B, phi.shape[2])), np.zeros(B)
    schedule = cfg.variant.schedule(phi.shape[2])
    active = np.ones(B, dtype=bool)
    first = last = None
    for _ in range(epochs):
        res = online_pass(phi, desired, w, b, mu, schedule, active=active)
        w, b = res.weights, res.bias
        active &= ~res.diverged
        with np.errstate(over="ignore", invalid="ignore"):
            ep = np.where(active, res.sq_errors.mean(axis=1), np.inf)
        first = ep if first is None else first
        last = ep
    with np.errstate(invalid="ignore"):
        diverged = ~active | ~np.isfinite(last) | (last > growth * first)
    return StabilityReport(factor, q, mu, bounds, diverged)
