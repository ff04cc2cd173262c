"""Continuous-time martingales with closed-form conditional cumulants.

Every model takes ``X = M_T`` for a martingale ``M`` and knows the law of
``X`` given ``F_t`` exactly, so sampled paths of ``(X^(1), ..., X^(k))``
carry no estimation error beyond the driving noise.

Randomness is drawn per path from ``SeedSequence(seed, spawn_key=(path_id,))``.
A path therefore depends only on ``(seed, path_id)``, never on how paths
are split between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..cumulants import moments_to_cumulants
from ..paths import MultiPath, PathBatch

__all__ = [
    "path_rng",
    "uniform_grid",
    "MartingaleModel",
    "PoissonMartingale",
    "ExponentialMartingale",
    "BrownianMartingale",
    "MODELS",
    "make_model",
    "simulate_poisson_martingale",
    "simulate_exponential_martingale",
    "simulate_brownian_martingale",
]


def path_rng(seed: int, path_id: int) -> np.random.Generator:
    """Independent generator for one path index."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(path_id),))))


def uniform_grid(horizon: float, grid_size: int) -> np.ndarray:
    if int(grid_size) != grid_size or grid_size < 1:
        raise ValueError(f"grid_size must be a positive integer, got {grid_size!r}")
    if not horizon > 0:
        raise ValueError(f"horizon must be positive, got {horizon!r}")
    return np.linspace(0.0, horizon, int(grid_size) + 1)


class MartingaleModel:
    """Interface shared by the simulators."""

    name: str = ""
    horizon: float = 1.0

    def cumulants_at_zero(self, order: int) -> np.ndarray:
        """Exact ``X^(1..order)_0``, i.e. the cumulants of ``X``."""
        raise NotImplementedError

    def sample_batch(self, seed: int, path_ids, grid_size: int, n_components: int) -> PathBatch:
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def describe(self) -> dict:
        return {"model": self.name, **self.params()}


@dataclass
class PoissonMartingale(MartingaleModel):
    """Compensated Poisson process ``M_t = N_t - lam * t``.

    Given ``F_t``, ``X - M_t`` is a centred Poisson(``lam (T - t)``) variable,
    so ``X^(1)_t = M_t`` and ``X^(k)_t = lam (T - t)`` for ``k >= 2``.
    """

    lam: float = 1.0
    horizon: float = 1.0
    name = "poisson"

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("rate must be non-negative")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")

    def params(self):
        return {"lam": self.lam, "horizon": self.horizon}

    def cumulants_at_zero(self, order):
        out = np.full(order, self.lam * self.horizon)
        out[0] = 0.0
        return out

    def _jump_times(self, rng):
        mean = self.lam * self.horizon
        if mean == 0:
            return np.empty(0)
        chunk = int(mean + 6 * math.sqrt(mean) + 8)
        times = np.cumsum(rng.exponential(1.0 / self.lam, chunk))
        while times[-1] <= self.horizon:
            more = times[-1] + np.cumsum(rng.exponential(1.0 / self.lam, chunk))
            times = np.concatenate([times, more])
        return times[times <= self.horizon]

    def sample_batch(self, seed, path_ids, grid_size, n_components):
        grid = uniform_grid(self.horizon, grid_size)
        path_ids = np.atleast_1d(np.asarray(path_ids, dtype=np.int64))
        values = np.empty((path_ids.size, grid.size, n_components))
        mark_path, mark_time = [], []
        for row, pid in enumerate(path_ids):
            jumps = self._jump_times(path_rng(seed, pid))
            counts = np.searchsorted(jumps, grid, side="right")
            values[row, :, 0] = counts - self.lam * grid
            mark_path.append(np.full(jumps.size, row))
            mark_time.append(jumps)
        values[:, :, 1:] = (self.lam * (self.horizon - grid))[None, :, None]
        mark_path = np.concatenate(mark_path)
        mark_jump = np.zeros((mark_path.size, n_components))
        mark_jump[:, 0] = 1.0
        return PathBatch(grid, values, mark_path, np.concatenate(mark_time), mark_jump, path_ids)


def _lognormal_unit_cumulants(tau: np.ndarray, order: int) -> np.ndarray:
    """Cumulants of ``exp(W_tau - tau/2)``; moments are ``exp(k(k-1) tau / 2)``."""
    k = np.arange(1, order + 1)
    moments = np.exp(np.multiply.outer(tau, k * (k - 1) / 2.0))
    return moments_to_cumulants(moments)


@dataclass
class ExponentialMartingale(MartingaleModel):
    """``M_t = exp(W_t - t/2)``; ``X^(k)_t = M_t^k * kappa_k(T - t)`` with lognormal ``kappa_k``."""

    horizon: float = 1.0
    name = "expmart"

    def params(self):
        return {"horizon": self.horizon}

    def cumulants_at_zero(self, order):
        return _lognormal_unit_cumulants(np.array([self.horizon]), order)[0]

    def conditional_cumulants(self, grid, m, order):
        """``X^(1..order)`` at each grid time given ``M`` values ``m`` (shape (..., len(grid)))."""
        unit = _lognormal_unit_cumulants(self.horizon - np.asarray(grid), order)
        powers = np.asarray(m)[..., None] ** np.arange(1, order + 1)
        return powers * unit

    def sample_batch(self, seed, path_ids, grid_size, n_components):
        grid = uniform_grid(self.horizon, grid_size)
        dt = np.diff(grid)
        path_ids = np.atleast_1d(np.asarray(path_ids, dtype=np.int64))
        z = np.stack([path_rng(seed, pid).standard_normal(dt.size) for pid in path_ids])
        w = np.concatenate([np.zeros((path_ids.size, 1)), np.cumsum(z * np.sqrt(dt), axis=1)], axis=1)
        m = np.exp(w - grid / 2.0)
        values = self.conditional_cumulants(grid, m, n_components)
        empty = np.empty(0)
        return PathBatch(grid, values, empty.astype(np.int64), empty, np.empty((0, n_components)), path_ids)


@dataclass
class BrownianMartingale(MartingaleModel):
    """``M = W``: ``X^(2)_t = T - t`` and higher cumulants vanish."""

    horizon: float = 1.0
    name = "brownian"

    def params(self):
        return {"horizon": self.horizon}

    def cumulants_at_zero(self, order):
        out = np.zeros(order)
        if order >= 2:
            out[1] = self.horizon
        return out

    def sample_batch(self, seed, path_ids, grid_size, n_components):
        grid = uniform_grid(self.horizon, grid_size)
        dt = np.diff(grid)
        path_ids = np.atleast_1d(np.asarray(path_ids, dtype=np.int64))
        z = np.stack([path_rng(seed, pid).standard_normal(dt.size) for pid in path_ids])
        values = np.zeros((path_ids.size, grid.size, n_components))
        values[:, 1:, 0] = np.cumsum(z * np.sqrt(dt), axis=1)
        if n_components >= 2:
            values[:, :, 1] = self.horizon - grid
        empty = np.empty(0)
        return PathBatch(grid, values, empty.astype(np.int64), empty, np.empty((0, n_components)), path_ids)


MODELS = {
    "poisson": PoissonMartingale,
    "expmart": ExponentialMartingale,
    "brownian": BrownianMartingale,
}


def make_model(name: str, **params) -> MartingaleModel:
    try:
        cls = MODELS[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(MODELS)}") from None
    return cls(**{k: v for k, v in params.items() if v is not None})


def simulate_poisson_martingale(lam: float, T: float, grid_size: int, seed: int,
                                n_components: int = 4, path_id: int = 0) -> MultiPath:
    """One compensated Poisson path with exact jump marks."""
    return PoissonMartingale(lam, T).sample_batch(seed, [path_id], grid_size, n_components).path(0)


def simulate_exponential_martingale(T: float, grid_size: int, seed: int,
                                    n_components: int = 4, path_id: int = 0) -> MultiPath:
    """One path of the exponential Brownian martingale (empty jump marks)."""
    return ExponentialMartingale(T).sample_batch(seed, [path_id], grid_size, n_components).path(0)


def simulate_brownian_martingale(T: float, grid_size: int, seed: int,
                                 n_components: int = 3, path_id: int = 0) -> MultiPath:
    """One Brownian path with its (deterministic) higher cumulant processes."""
    return BrownianMartingale(T).sample_batch(seed, [path_id], grid_size, n_components).path(0)
