"""Radial basis function networks trained with q-gradient updates."""
from .adaptive import AdaptiveQState, energy_identity_residual, error_recursion_step, q_max_bound, update_q
from .analysis import (CorrelationStats, SingularMatrixError, StabilityBounds, estimate_correlations,
                       mean_error_recursion, minimum_mse, spectral_step_limit, stability_bounds, system_matrix,
                       wiener_solution)
from .network import Cosine, Gaussian, RbfNetwork, activation_matrix, cosine_kernel, forward, gaussian_kernel
from .qlearn import (DivergenceError, QGain, TrainConfig, gain_matrix, jackson_derivative, online_pass,
                     q_gradient_step, train_epoch)

__all__ = [
    "AdaptiveQState", "CorrelationStats", "Cosine", "DivergenceError", "Gaussian", "QGain", "RbfNetwork",
    "SingularMatrixError", "StabilityBounds", "TrainConfig", "activation_matrix", "cosine_kernel",
    "energy_identity_residual", "error_recursion_step", "estimate_correlations", "forward", "gain_matrix",
    "gaussian_kernel", "jackson_derivative", "mean_error_recursion", "minimum_mse", "online_pass",
    "q_gradient_step", "q_max_bound", "spectral_step_limit", "stability_bounds", "system_matrix",
    "train_epoch", "update_q", "wiener_solution",
]
