"""Closed-form optimum and mean-convergence tools for q-trained RBF networks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

COND_LIMIT = 1e12


class SingularMatrixError(np.linalg.LinAlgError):
    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


@dataclass(frozen=True)
class CorrelationStats:
    """Kernel autocorrelation ``R``, cross-correlation ``p`` and desired power."""

    R: np.ndarray
    p: np.ndarray
    desired_power: float


def estimate_correlations(activations, desired) -> CorrelationStats:
    """Sample means of ``phi phi^T``, ``phi d`` and ``d^2``."""
    phi = np.asarray(activations, dtype=float)
    d = np.asarray(desired, dtype=float).ravel()
    if phi.ndim == 1:
        phi = phi[None, :]
    if phi.shape[0] == 0 or d.size == 0:
        raise ValueError("cannot estimate correlations from empty data")
    if phi.shape[0] != d.shape[0]:
        raise ValueError(f"{phi.shape[0]} activation vectors but {d.shape[0]} desired values")
    T = phi.shape[0]
    R = phi.T @ phi / T
    R = 0.5 * (R + R.T)
    return CorrelationStats(R, phi.T @ d / T, float(d @ d / T))


def wiener_solution(stats: CorrelationStats) -> np.ndarray:
    """Solve ``R w = p``; raises :class:`SingularMatrixError` for ill-conditioned ``R``."""
    R = np.asarray(stats.R, dtype=float)
    p = np.asarray(stats.p, dtype=float)
    if R.shape != (p.size, p.size):
        raise ValueError(f"R has shape {R.shape} but p has {p.size} entries")
    cond = np.linalg.cond(R)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrixError(f"autocorrelation matrix is singular (cond={cond:.3g})", cond)
    return np.linalg.solve(R, p)


def minimum_mse(noise_variance: float) -> float:
    """Excess-free error floor reached at the Wiener weights: the noise variance."""
    if noise_variance < 0:
        raise ValueError(f"noise variance must be non-negative, got {noise_variance}")
    return float(noise_variance)


@dataclass(frozen=True)
class ConvergenceTrace:
    """Expected weight errors ``E[dw(n)] = (I - mu A)^n E[dw(0)]`` for n = 0..horizon."""

    deltas: np.ndarray  # (horizon + 1, N)
    A: np.ndarray

    @property
    def mae(self) -> np.ndarray:
        return np.abs(self.deltas).mean(axis=1)


def system_matrix(gains, R) -> np.ndarray:
    """``A = G E[phi phi^T]`` for a vector of diagonal gains."""
    return np.asarray(gains, dtype=float)[:, None] * np.asarray(R, dtype=float)


def mean_error_recursion(A, mu: float, delta0, horizon: int) -> ConvergenceTrace:
    A = np.asarray(A, dtype=float)
    delta0 = np.asarray(delta0, dtype=float).ravel()
    if A.shape != (delta0.size, delta0.size):
        raise ValueError(f"A has shape {A.shape}, initial error has {delta0.size} entries")
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    step = np.eye(delta0.size) - mu * A
    out = np.empty((horizon + 1, delta0.size))
    out[0] = delta0
    for n in range(horizon):
        out[n + 1] = step @ out[n]
    return ConvergenceTrace(out, A)


class StabilityBounds(NamedTuple):
    general: float
    equal_q: float


def stability_bounds(q, eigenvalues) -> StabilityBounds:
    """Step-size limits ``1 / max_i (q_i + 1) lambda_i`` and ``1 / ((q + 1) lambda_max)``.

    For unequal ``q`` the equal-q form is evaluated at the largest ``q``.
    """
    lam = np.asarray(eigenvalues, dtype=float).ravel()
    if np.any(lam < 0) or not np.any(lam > 0):
        raise ValueError("eigenvalues must be non-negative with at least one positive")
    q = np.asarray(q, dtype=float).ravel()
    if np.any(q <= 0):
        raise ValueError("q must be positive")
    qv = np.broadcast_to(q, lam.shape) if q.size == 1 else q
    if qv.shape != lam.shape:
        raise ValueError(f"{q.size} q values for {lam.size} eigenvalues")
    general = 1.0 / np.max((qv + 1.0) * lam)
    equal = 1.0 / ((q.max() + 1.0) * lam.max())
    return StabilityBounds(float(general), float(equal))


def spectral_step_limit(A) -> float:
    """Largest ``mu`` with every eigenvalue of ``I - mu A`` inside the unit circle.

    Assumes the eigenvalues of ``A`` are real and positive, as they are for
    ``A = G R`` with positive gains and positive-definite ``R``.
    """
    ev = np.linalg.eigvals(np.asarray(A, dtype=float)).real
    return float(2.0 / ev.max())


def instantaneous_step_limit(phi, gains) -> float:
    """Per-sample diagnostic ``1 / ||phi||_G^2``; reported, never enforced."""
    phi = np.asarray(phi, dtype=float)
    energy = float(phi @ (np.asarray(gains, dtype=float) * phi))
    return np.inf if energy == 0 else 1.0 / energy
