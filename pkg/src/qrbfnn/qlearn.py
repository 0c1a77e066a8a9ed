"""Jackson-derivative gradient descent for RBF networks.

The q-gradient of the instantaneous cost ``e^2 / 2`` with respect to ``w_i``
evaluates to ``-(q_i + 1) / 2 * phi_i * e``, so a q-step is an ordinary LMS
step with a per-weight gain ``(q_i + 1) / 2``. With every ``q_i = 1`` it is
exactly the classical update.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Union

import numpy as np

from .adaptive import AdaptiveQState, update_q
from .network import RbfNetwork, activation_matrix


class DivergenceError(FloatingPointError):
    """Raised when an update would leave non-finite parameters."""


def jackson_derivative(f: Callable[[float], float], k: float, q: float) -> float:
    """``(f(q k) - f(k)) / ((q - 1) k)``; undefined at ``q = 1`` or ``k = 0``."""
    if q == 1:
        raise ValueError("Jackson derivative is undefined at q = 1; use the classical derivative")
    if k == 0:
        raise ValueError("Jackson derivative is undefined at k = 0")
    return (f(q * k) - f(k)) / ((q - 1) * k)


@dataclass(frozen=True)
class QGain:
    """Fixed per-weight q parameters ``q`` and the bias parameter ``q0``."""

    q: np.ndarray
    q0: float = 1.0

    def __post_init__(self):
        q = np.array(self.q, dtype=float, ndmin=1)
        if not (np.all(np.isfinite(q)) and np.all(q > 0)):
            raise ValueError("q parameters must be positive and finite")
        if not (np.isfinite(self.q0) and self.q0 > 0):
            raise ValueError(f"q0 must be positive, got {self.q0}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "q0", float(self.q0))

    @classmethod
    def uniform(cls, n: int, q: float = 1.0, q0: float = 1.0) -> "QGain":
        return cls(np.full(n, float(q)), q0)

    @property
    def gains(self) -> np.ndarray:
        return (self.q + 1.0) / 2.0

    @property
    def bias_gain(self) -> float:
        return (self.q0 + 1.0) / 2.0


QSchedule = Union[QGain, AdaptiveQState]


def gain_matrix(qg: QGain) -> np.ndarray:
    return np.diag(qg.gains)


@dataclass(frozen=True)
class TrainConfig:
    mu: float
    epochs: int = 1
    seed: int = 0
    trials: int = 1
    shuffle: bool = False

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"step size must be positive, got {self.mu}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class SampleError:
    e: float

    @property
    def cost(self) -> float:
        return 0.5 * self.e * self.e


def q_gradient_step(net: RbfNetwork, phi, e: float, cfg: TrainConfig, qg: QGain) -> RbfNetwork:
    """Return a new network after one q-gradient update with error ``e``."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (net.n_neurons,):
        raise ValueError(f"expected {net.n_neurons} activations, got shape {phi.shape}")
    if qg.q.shape[0] != net.n_neurons:
        raise ValueError(f"{qg.q.shape[0]} q parameters for {net.n_neurons} neurons")
    if not (np.all(np.isfinite(phi)) and np.isfinite(e)):
        raise DivergenceError("non-finite activations or error")
    with np.errstate(over="ignore", invalid="ignore"):
        weights = net.weights + cfg.mu * qg.gains * phi * e
        bias = net.bias + cfg.mu * qg.bias_gain * e
    if not (np.all(np.isfinite(weights)) and np.isfinite(bias)):
        raise DivergenceError("update produced non-finite parameters")
    return RbfNetwork(net.centers, weights, bias, net.kernel)


@dataclass
class PassResult:
    """Outcome of :func:`online_pass` for a batch of B networks over T samples."""

    weights: np.ndarray  # (B, N)
    bias: np.ndarray  # (B,)
    errors: np.ndarray  # (B, T) signed errors, NaN after divergence
    q_trace: np.ndarray  # (B, T), q in effect at each update
    schedule: QSchedule
    diverged_at: np.ndarray  # (B,), -1 if the network never diverged
    clamp_violations: int = 0
    weight_trace: Optional[np.ndarray] = None  # (B, T, N) when requested

    @property
    def diverged(self) -> np.ndarray:
        return self.diverged_at >= 0

    @property
    def sq_errors(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return self.errors**2


def online_pass(phi, desired, weights, bias, mu: float, schedule: QSchedule,
                order: Optional[np.ndarray] = None, active=None, record_weights: bool = False) -> PassResult:
    """Sample-by-sample q-gradient training of B independent networks.

    Parameters
    ----------
    phi : array_like, shape (B, T, N)
        Precomputed hidden activations (centers are fixed during training).
    desired : array_like, shape (B, T)
    weights : array_like, shape (B, N)
    bias : array_like, shape (B,)
    mu : float or array_like, shape (B,)
        One step size for all networks or one per network.
    schedule : QGain or AdaptiveQState
        For ``AdaptiveQState``, ``q`` may be a scalar or have shape (B,).
    order : array_like of int, shape (B, T), optional
        Presentation order per network; defaults to 0..T-1.
    active : array_like of bool, shape (B,), optional
        Networks that are already flagged as diverged are left untouched.
    record_weights : bool
        Keep the weights after every update in ``PassResult.weight_trace``.
    """
    phi = np.asarray(phi, dtype=float)
    desired = np.asarray(desired, dtype=float)
    B, T, N = phi.shape
    if desired.shape != (B, T):
        raise ValueError(f"desired has shape {desired.shape}, expected {(B, T)}")
    w = np.array(weights, dtype=float).reshape(B, N)
    b = np.array(bias, dtype=float).reshape(B)
    mu = np.broadcast_to(np.asarray(mu, dtype=float), (B,))
    mu_col = mu[:, None]
    w_last = w.copy()
    b_last = b.copy()
    energy = np.einsum("btn,btn->bt", phi, phi)
    rows = np.arange(B)
    active = np.ones(B, dtype=bool) if active is None else np.array(active, dtype=bool)
    diverged_at = np.full(B, -1)
    err = np.full((B, T), np.nan)
    q_trace = np.empty((B, T))
    violations = 0
    trace = np.empty((B, T, N)) if record_weights else None

    adaptive = isinstance(schedule, AdaptiveQState)
    if adaptive:
        state = replace(schedule, q=np.broadcast_to(np.asarray(schedule.q, dtype=float), (B,)).copy())
    else:
        if schedule.q.shape[-1] != N:
            raise ValueError(f"{schedule.q.shape[-1]} q parameters for {N} neurons")
        g = np.broadcast_to(schedule.gains, (B, N))
        g0 = schedule.bias_gain
        q_trace[:] = schedule.q.mean()

    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(T):
            if order is None:
                f, d, en = phi[:, n], desired[:, n], energy[:, n]
            else:
                idx = order[:, n]
                f, d, en = phi[rows, idx], desired[rows, idx], energy[rows, idx]
            e = d - np.einsum("bn,bn->b", f, w) - b
            e_upd = np.where(active, e, 0.0)
            w_last[:] = w
            b_last[:] = b
            if adaptive:
                q_trace[:, n] = state.q
                gain = (state.q + 1.0) / 2.0
                w += (mu * gain * e_upd)[:, None] * f
                b += mu * gain * e_upd
            else:
                w += mu_col * g * f * e_upd[:, None]
                b += mu * g0 * e_upd
            ok = np.isfinite(e) & np.isfinite(b) & np.isfinite(w).all(axis=1)
            bad = active & ~ok
            if bad.any():
                w[bad] = w_last[bad]
                b[bad] = b_last[bad]
                diverged_at[bad] = n
                active &= ~bad
                e_upd = np.where(active, e_upd, 0.0)
            err[active, n] = e[active]
            if trace is not None:
                trace[:, n] = w
            if adaptive:
                state = update_q(state, e_upd, mu, f)
                violations += int(np.count_nonzero(active & (en > 0) & (state.q * mu * en >= 1.0)))

    if adaptive:
        schedule = state
    return PassResult(w, b, err, q_trace, schedule, diverged_at, violations, trace)


@dataclass
class EpochResult:
    network: RbfNetwork
    errors: List[SampleError]
    schedule: QSchedule
    q_trace: np.ndarray
    diverged: bool = False


def train_epoch(net: RbfNetwork, inputs, desired, cfg: TrainConfig, schedule: QSchedule,
                rng: Optional[np.random.Generator] = None) -> EpochResult:
    """One online pass over ``inputs`` in presentation order.

    On divergence the pass stops; the returned network holds the last finite
    parameters and ``diverged`` is set.
    """
    X = np.asarray(inputs, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    d = np.asarray(desired, dtype=float).ravel()
    if X.shape[0] != d.shape[0]:
        raise ValueError(f"{X.shape[0]} inputs but {d.shape[0]} desired values")
    if d.shape[0] == 0:
        raise ValueError("empty training sequence")
    phi = activation_matrix(net.centers, net.kernel, X)
    order = None
    if cfg.shuffle:
        rng = np.random.default_rng(cfg.seed) if rng is None else rng
        order = rng.permutation(d.shape[0])[None, :]
    res = online_pass(phi[None], d[None], net.weights[None], [net.bias], cfg.mu, schedule, order)
    stop = res.diverged_at[0] if res.diverged[0] else d.shape[0]
    out = RbfNetwork(net.centers, res.weights[0], res.bias[0], net.kernel)
    errors = [SampleError(float(v)) for v in res.errors[0, :stop]]
    schedule = res.schedule
    if isinstance(schedule, AdaptiveQState) and np.ndim(schedule.q) == 1:
        schedule = replace(schedule, q=float(schedule.q[0]))
    return EpochResult(out, errors, schedule, res.q_trace[0, :stop], bool(res.diverged[0]))
