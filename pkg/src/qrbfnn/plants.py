"""Benchmark systems, excitation signals and center selection."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

# Plants take their noise samples as arguments and never draw them, so a
# plant is a deterministic function of (state, input, noise).


@dataclass
class NonlinearPlant:
    """``y = a1 r(t) + a2 r(t-1) + a3 r(t-2) + a4 [cos(a5 r(t)) + exp(-|r(t)|)] + n(t)``."""

    a: Tuple[float, ...] = (2.0, -0.5, -0.1, -0.7, 3.0)
    r1: float = 0.0
    r2: float = 0.0

    def reset(self):
        self.r1 = self.r2 = 0.0

    def simulate(self, inputs, noise=None) -> np.ndarray:
        noise = np.zeros(len(inputs)) if noise is None else noise
        return np.array([nonlinear_plant_step(self, r, v) for r, v in zip(inputs, noise)])


def nonlinear_plant_step(plant: NonlinearPlant, r: float, noise: float = 0.0) -> float:
    a1, a2, a3, a4, a5 = plant.a
    y = a1 * r + a2 * plant.r1 + a3 * plant.r2 + a4 * (math.cos(a5 * r) + math.exp(-abs(r))) + noise
    plant.r2, plant.r1 = plant.r1, r
    return y


@dataclass
class HammersteinPlant:
    """Polynomial static nonlinearity followed by second-order linear dynamics."""

    m: Tuple[float, ...] = (31.549, 41.732, 24.201, 68.634)
    n: Tuple[float, ...] = (0.4, 0.35, 0.15)
    h: float = 0.1
    c1: float = 0.0
    c2: float = 0.0

    def reset(self):
        self.c1 = self.c2 = 0.0

    def simulate(self, inputs, disturbance=None) -> np.ndarray:
        disturbance = np.zeros(len(inputs)) if disturbance is None else disturbance
        return np.array([hammerstein_step(self, r, v) for r, v in zip(inputs, disturbance)])


def hammerstein_nonlinearity(m, r):
    m1, m2, m3, m4 = m
    return -m1 * r + m2 * r**2 - m3 * r**3 + m4 * r**4


def hammerstein_step(plant: HammersteinPlant, r: float, disturbance: float = 0.0) -> float:
    n1, n2, n3 = plant.n
    a = hammerstein_nonlinearity(plant.m, r)
    c = n1 * plant.c1 + n2 * plant.c2 + n3 * a + disturbance
    plant.c2, plant.c1 = plant.c1, c
    return c


@dataclass
class MimoPlant:
    """Two-input two-output plant; ``c1`` is autoregressive, ``c2`` is FIR plus a sine."""

    m: Tuple[float, ...] = (0.21, -0.12, 0.3, -0.6, 0.5)
    n: Tuple[float, ...] = (0.25, -0.1, -0.2, 1.2, 0.2)
    r1_hist: Tuple[float, float] = (0.0, 0.0)
    r2_hist: Tuple[float, float] = (0.0, 0.0)
    c1_prev: float = 0.0

    def reset(self):
        self.r1_hist = self.r2_hist = (0.0, 0.0)
        self.c1_prev = 0.0

    def simulate(self, r1, r2) -> np.ndarray:
        return np.array([mimo_step(self, a, b) for a, b in zip(r1, r2)])


def mimo_step(plant: MimoPlant, r1: float, r2: float) -> Tuple[float, float]:
    m1, m2, m3, m4, m5 = plant.m
    n1, n2, n3, n4, n5 = plant.n
    r1_1, r1_2 = plant.r1_hist
    r2_1, r2_2 = plant.r2_hist
    c1 = m1 * r1 + m2 * plant.c1_prev - m3 * r1_2 + m4 * math.cos(m5 * r2) + math.exp(-abs(r1))
    c2 = n1 * r2 - n2 * r2_1 + n3 * r2_2 + n4 * math.sin(n5 * r1)
    plant.r1_hist = (r1, r1_1)
    plant.r2_hist = (r2, r2_1)
    plant.c1_prev = c1
    return c1, c2


@dataclass(frozen=True)
class MackeyGlassSeries:
    """Delay equation ``dr/dt = n r(t-tau) / (1 + r(t-tau)^10) - m r(t)``.

    The delayed term is zero while ``t - tau < 0``. Integration is classical
    RK4 with step ``step``; the delayed value at half steps comes from cubic
    Hermite interpolation of the stored trajectory, which keeps the scheme
    fourth order. ``tau`` must be a multiple of ``step``.
    """

    n_coef: float = 0.2
    m_coef: float = 0.1
    tau: int = 20
    length: int = 3000
    r0: float = 1.2
    step: float = 0.1

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError("tau must be at least one sample")
        if self.length <= self.tau:
            raise ValueError("length must exceed tau")
        per = 1.0 / self.step
        if abs(per - round(per)) > 1e-9 or abs(self.tau * per - round(self.tau * per)) > 1e-6:
            raise ValueError("step must divide both the unit interval and tau")


def mackey_glass_series(cfg: MackeyGlassSeries = MackeyGlassSeries()) -> np.ndarray:
    """Samples ``r(1), ..., r(length)`` of the Mackey-Glass trajectory."""
    h = cfg.step
    per = int(round(1.0 / h))
    lag = int(round(cfg.tau / h))
    steps = cfg.length * per
    n, m = cfg.n_coef, cfg.m_coef

    def rhs(x, xd):
        return n * xd / (1.0 + xd**10) - m * x

    r = [0.0] * (steps + 1)
    fl = [0.0] * (steps + 1)  # derivative, left limit at each grid point
    fr = [0.0] * (steps + 1)  # derivative, right limit
    r[0] = cfg.r0
    fl[0] = fr[0] = rhs(cfg.r0, 0.0)
    for k in range(steps):
        j = k - lag
        if j < 0:
            xd0 = xdm = xd1 = 0.0
        else:
            xd0, xd1 = r[j], r[j + 1]
            xdm = 0.5 * (xd0 + xd1) + h * (fr[j] - fl[j + 1]) / 8.0
        x = r[k]
        k1 = rhs(x, xd0)
        k2 = rhs(x + 0.5 * h * k1, xdm)
        k3 = rhs(x + 0.5 * h * k2, xdm)
        k4 = rhs(x + h * k3, xd1)
        x = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not math.isfinite(x):
            raise FloatingPointError(f"Mackey-Glass integration blew up at t={(k + 1) * h}")
        r[k + 1] = x
        fl[k + 1] = rhs(x, xd1)
        fr[k + 1] = rhs(x, r[k + 1 - lag]) if k + 1 >= lag else fl[k + 1]
    return np.array(r[per::per])


def rectangular_signal(samples_per_half: int, periods: int) -> np.ndarray:
    if samples_per_half < 1 or periods < 1:
        raise ValueError("samples_per_half and periods must be at least 1")
    period = np.r_[np.ones(samples_per_half), -np.ones(samples_per_half)]
    return np.tile(period, periods)


def awgn(signal, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    """Noise sequence for ``signal`` at the given SNR (zeros for ``snr_db = inf``)."""
    signal = np.asarray(signal, dtype=float)
    if signal.size == 0:
        raise ValueError("empty signal")
    if math.isinf(snr_db) and snr_db > 0:
        return np.zeros_like(signal)
    power = float(np.mean(signal**2))
    if power <= 0:
        raise ValueError("signal has zero power; SNR is undefined")
    return rng.normal(0.0, math.sqrt(power * 10.0 ** (-snr_db / 10.0)), size=signal.shape)


def add_awgn(signal, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    signal = np.asarray(signal, dtype=float)
    return signal + awgn(signal, snr_db, rng)


def empirical_snr_db(clean, noisy) -> float:
    clean = np.asarray(clean, dtype=float)
    noise = np.asarray(noisy, dtype=float) - clean
    return float(10 * np.log10(np.mean(clean**2) / np.mean(noise**2)))


def tapped_delay(signal, taps: int, delay: int = 0) -> np.ndarray:
    """Rows ``[s(t-delay), s(t-delay-1), ..., s(t-delay-taps+1)]``, zero before the start."""
    s = np.asarray(signal, dtype=float)
    padded = np.r_[np.zeros(taps + delay), s]
    T = s.size
    return np.stack([padded[taps - k: taps - k + T] for k in range(taps)], axis=1)


@dataclass
class KMeansResult:
    centers: np.ndarray
    labels: np.ndarray
    inertia_history: list = field(default_factory=list)


def kmeans(data, k: int, seed=0, max_iters: int = 100) -> KMeansResult:
    """Lloyd iteration from a k-means++ start.

    Centers are returned sorted lexicographically so that repeated runs on the
    same clusters list them in a stable order.
    """
    X = np.asarray(data, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if k < 1:
        raise ValueError("k must be at least 1")
    distinct = np.unique(X, axis=0).shape[0]
    if k > distinct:
        raise ValueError(f"k={k} exceeds the {distinct} distinct points")
    rng = np.random.default_rng(seed)

    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(X.shape[0])]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        centers[j] = X[rng.choice(X.shape[0], p=d2 / d2.sum())]
        d2 = np.minimum(d2, np.sum((X - centers[j]) ** 2, axis=1))

    history = []
    labels = None
    for _ in range(max_iters):
        dist = np.sum((X[:, None, :] - centers[None]) ** 2, axis=2)
        new_labels = dist.argmin(axis=1)
        history.append(float(dist[np.arange(X.shape[0]), new_labels].sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            members = X[labels == j]
            if members.shape[0]:
                centers[j] = members.mean(axis=0)
            else:
                # refill an empty cluster with the worst-fit point
                far = dist[np.arange(X.shape[0]), labels].argmax()
                centers[j] = X[far]
                labels[far] = j
    order = np.lexsort(centers.T[::-1])
    remap = np.empty(k, dtype=int)
    remap[order] = np.arange(k)
    return KMeansResult(centers[order], remap[labels], history)


def kmeans_centers(data, k: int, seed=0, max_iters: int = 100) -> np.ndarray:
    return kmeans(data, k, seed, max_iters).centers
