"""Time-varying q schedule with its small-gain stability clamp."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

# keeps the clamped q strictly inside the open interval 0 < q < 1/(mu ||phi||^2)
CLAMP_MARGIN = 1e-9
_Q_FLOOR = np.finfo(float).tiny


@dataclass(frozen=True)
class AdaptiveQState:
    """State of the rule ``q(n+1) = beta q(n) + gamma e(n)^2`` with clamping.

    ``q`` is a scalar for a single network, or an array with one entry per
    network when several networks are trained side by side.
    """

    q: float = 1.0
    beta: float = 0.9
    gamma: float = 5.0
    q_cap: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        q = np.asarray(self.q, dtype=float)
        if not (np.all(np.isfinite(q)) and np.all(q > 0)):
            raise ValueError("q must be positive and finite")
        if self.q_cap is not None and not self.q_cap > 0:
            raise ValueError(f"q_cap must be positive, got {self.q_cap}")

    @property
    def gain(self):
        """Update gain ``(q + 1) / 2`` shared by every weight and the bias."""
        return (np.asarray(self.q, dtype=float) + 1.0) / 2.0


def q_max_bound(mu: float, phi):
    """Largest admissible q for one sample, ``1 / (mu ||phi||^2)``.

    Returns ``inf`` when ``phi`` is the zero vector (no bound for that sample).
    Accepts a batch of activation vectors along the leading axes.
    """
    mu = np.asarray(mu, dtype=float)
    if np.any(mu <= 0):
        raise ValueError(f"mu must be positive, got {mu}")
    phi = np.asarray(phi, dtype=float)
    energy = np.einsum("...i,...i->...", phi, phi)
    with np.errstate(divide="ignore"):
        bound = np.where(energy > 0, 1.0 / (mu * energy), np.inf)
    return float(bound) if bound.ndim == 0 else bound


def update_q(state: AdaptiveQState, e, mu: float, phi) -> AdaptiveQState:
    """Advance the schedule by one sample error ``e`` seen with activations ``phi``."""
    e = np.asarray(e, dtype=float)
    if not np.all(np.isfinite(e)):
        raise ValueError("non-finite error passed to update_q")
    raw = state.beta * np.asarray(state.q, dtype=float) + state.gamma * e * e
    cap = q_max_bound(mu, phi) * (1.0 - CLAMP_MARGIN)
    if state.q_cap is not None:
        cap = np.minimum(cap, state.q_cap)
    q = np.maximum(np.minimum(raw, cap), _Q_FLOOR)
    return replace(state, q=float(q) if q.ndim == 0 else q)


def error_recursion_step(w, w_opt, phi, zeta: float, q: float, mu: float):
    """One step of the weight-error recursion used in the robustness analysis.

    The a priori error is ``e_a = phi . (w_opt - w)``, the output error
    ``e = e_a + zeta`` and the a posteriori error ``e_b = e_a - mu q ||phi||^2 e``.
    The weights move by ``-mu q phi (e_a - e_b)``.

    Returns
    -------
    (w_after, e_a, e_b)
    """
    w = np.asarray(w, dtype=float)
    phi = np.asarray(phi, dtype=float)
    e_a = float(phi @ (np.asarray(w_opt, dtype=float) - w))
    e = e_a + zeta
    e_b = e_a - mu * q * float(phi @ phi) * e
    w_after = w - mu * q * phi * (e_a - e_b)
    return w_after, e_a, e_b


def energy_identity_residual(w_before, w_after, e_a: float, e_b: float, q: float, mu: float) -> float:
    """Deviation from one of the lossless energy ratio between two weight states."""
    w_before = np.asarray(w_before, dtype=float)
    w_after = np.asarray(w_after, dtype=float)
    den = w_before @ w_before + 2 * mu * q * e_b
    if den == 0:
        raise ZeroDivisionError("energy ratio denominator is zero")
    num = w_after @ w_after + 2 * mu * q * e_a
    return float(num / den - 1.0)
