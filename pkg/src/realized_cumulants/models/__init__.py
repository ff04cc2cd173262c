"""Martingale models with computable conditional cumulant processes."""

from .simulators import (
    MODELS,
    BrownianMartingale,
    ExponentialMartingale,
    MartingaleModel,
    PoissonMartingale,
    make_model,
    path_rng,
    simulate_brownian_martingale,
    simulate_exponential_martingale,
    simulate_poisson_martingale,
    uniform_grid,
)
from .tree import (
    MAX_ENUMERATED_PATHS,
    CumulantTree,
    TreeModel,
    increment_bell_residuals,
    tree_backward_induction,
    tree_enumerate_paths,
    tree_sample_paths,
)

__all__ = [
    "MODELS",
    "MAX_ENUMERATED_PATHS",
    "BrownianMartingale",
    "CumulantTree",
    "ExponentialMartingale",
    "MartingaleModel",
    "PoissonMartingale",
    "TreeModel",
    "increment_bell_residuals",
    "make_model",
    "path_rng",
    "simulate_brownian_martingale",
    "simulate_exponential_martingale",
    "simulate_poisson_martingale",
    "tree_backward_induction",
    "tree_enumerate_paths",
    "tree_sample_paths",
    "uniform_grid",
]
