"""RBF network data model and forward computation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np


@dataclass(frozen=True)
class Gaussian:
    """Gaussian kernel ``exp(-||x - c||^2 / spread^2)``."""

    spread: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.spread) or self.spread <= 0:
            raise ValueError(f"Gaussian spread must be positive, got {self.spread}")


@dataclass(frozen=True)
class Cosine:
    """Cosine-similarity kernel with a small denominator stabilizer."""

    stabilizer: float = 1e-8

    def __post_init__(self):
        if not np.isfinite(self.stabilizer) or self.stabilizer <= 0:
            raise ValueError(f"cosine stabilizer must be positive, got {self.stabilizer}")


KernelSpec = Union[Gaussian, Cosine]


def _pair(x, c):
    x = np.asarray(x, dtype=float).ravel()
    c = np.asarray(c, dtype=float).ravel()
    if x.shape != c.shape:
        raise ValueError(f"dimension mismatch: x has {x.size} entries, c has {c.size}")
    return x, c


def gaussian_kernel(x, c, spread: float) -> float:
    x, c = _pair(x, c)
    if spread <= 0:
        raise ValueError(f"spread must be positive, got {spread}")
    d = x - c
    return float(np.exp(-(d @ d) / spread**2))


def cosine_kernel(x, c, stabilizer: float = 1e-8) -> float:
    x, c = _pair(x, c)
    if stabilizer <= 0:
        raise ValueError(f"stabilizer must be positive, got {stabilizer}")
    return float((x @ c) / (np.linalg.norm(x) * np.linalg.norm(c) + stabilizer))


@dataclass
class RbfNetwork:
    """Single-output RBF network ``y = sum_i w_i phi_i(x) + b``.

    ``centers`` has shape (N, M): N hidden neurons over an M-dimensional
    input. Weights and bias start at zero unless given.
    """

    centers: np.ndarray
    weights: np.ndarray = None
    bias: float = 0.0
    kernel: KernelSpec = field(default_factory=Gaussian)

    def __post_init__(self):
        centers = np.array(self.centers, dtype=float)
        if centers.ndim == 1:
            centers = centers[:, None]
        if centers.ndim != 2 or centers.shape[0] < 1 or centers.shape[1] < 1:
            raise ValueError(f"centers must be a non-empty (N, M) array, got shape {centers.shape}")
        if self.weights is None:
            weights = np.zeros(centers.shape[0])
        else:
            weights = np.array(self.weights, dtype=float).ravel()
        if weights.shape[0] != centers.shape[0]:
            raise ValueError(f"{weights.shape[0]} weights for {centers.shape[0]} centers")
        bias = float(self.bias)
        if not (np.all(np.isfinite(centers)) and np.all(np.isfinite(weights)) and np.isfinite(bias)):
            raise ValueError("network parameters must be finite")
        if not isinstance(self.kernel, (Gaussian, Cosine)):
            raise TypeError(f"unsupported kernel {self.kernel!r}")
        self.centers = centers
        self.weights = weights
        self.bias = bias

    @property
    def n_neurons(self) -> int:
        return self.centers.shape[0]

    @property
    def input_dim(self) -> int:
        return self.centers.shape[1]

    def copy(self) -> "RbfNetwork":
        return RbfNetwork(self.centers.copy(), self.weights.copy(), self.bias, self.kernel)


def activation_matrix(centers, kernel: KernelSpec, inputs) -> np.ndarray:
    """Hidden activations for a batch of inputs.

    Parameters
    ----------
    centers : array_like, shape (N, M)
    kernel : Gaussian or Cosine
    inputs : array_like, shape (..., M)

    Returns
    -------
    numpy.ndarray, shape (..., N)
    """
    centers = np.asarray(centers, dtype=float)
    X = np.asarray(inputs, dtype=float)
    if X.shape[-1] != centers.shape[-1]:
        raise ValueError(f"inputs have dimension {X.shape[-1]}, centers {centers.shape[-1]}")
    if isinstance(kernel, Gaussian):
        diff = X[..., None, :] - centers
        return np.exp(-np.einsum("...nm,...nm->...n", diff, diff) / kernel.spread**2)
    if isinstance(kernel, Cosine):
        num = X @ centers.T
        den = np.linalg.norm(X, axis=-1)[..., None] * np.linalg.norm(centers, axis=-1)
        return num / (den + kernel.stabilizer)
    raise TypeError(f"unsupported kernel {kernel!r}")


def hidden_activations(net: RbfNetwork, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != net.input_dim:
        raise ValueError(f"input has dimension {x.shape[0]}, network expects {net.input_dim}")
    return activation_matrix(net.centers, net.kernel, x)


def forward(net: RbfNetwork, x) -> float:
    return float(hidden_activations(net, x) @ net.weights + net.bias)
