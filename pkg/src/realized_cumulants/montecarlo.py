"""Deterministic Monte Carlo driver.

Paths are processed in fixed-size blocks of consecutive path ids.  Each
block is independent of the worker layout, and per-path results are
gathered back in path order before reduction, so the mean and standard
error are bit-identical for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .models.simulators import MartingaleModel

BLOCK_SIZE = 2048

__all__ = ["BLOCK_SIZE", "MCResult", "run_paths", "summarize"]


@dataclass
class MCResult:
    """Per-path samples of one or more statistics, in path-id order."""

    samples: dict[str, np.ndarray]

    @property
    def n(self) -> int:
        return next(iter(self.samples.values())).size

    def mean(self, key: str) -> float:
        return summarize(self.samples[key])[0]

    def standard_error(self, key: str) -> float:
        return summarize(self.samples[key])[1]


def summarize(x: np.ndarray) -> tuple[float, float]:
    """Mean and standard error with correctly rounded sums."""
    x = np.asarray(x, dtype=float)
    n = x.size
    mean = math.fsum(x) / n
    if n < 2:
        return mean, float("nan")
    var = math.fsum((x - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def _run_block(task):
    statistic, model, seed, start, stop, grid_size, n_components = task
    batch = model.sample_batch(seed, np.arange(start, stop), grid_size, n_components)
    return statistic(batch)


def run_paths(statistic: Callable, model: MartingaleModel, n_paths: int, grid_size: int,
              n_components: int, seed: int, workers: int = 1,
              block_size: int = BLOCK_SIZE) -> MCResult:
    """Apply ``statistic(batch) -> {name: per-path array}`` to ``n_paths`` simulated paths.

    ``statistic`` must be a module-level function when ``workers > 1``.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be positive")
    if workers < 1:
        raise ValueError("workers must be positive")
    tasks = [
        (statistic, model, seed, start, min(start + block_size, n_paths), grid_size, n_components)
        for start in range(0, n_paths, block_size)
    ]
    if workers == 1 or len(tasks) == 1:
        parts = [_run_block(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_block, tasks))
    keys = parts[0].keys()
    return MCResult({k: np.concatenate([p[k] for p in parts]) for k in keys})
