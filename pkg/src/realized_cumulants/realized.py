"""Realized cumulants and their exact / Monte Carlo verification.

The ``(n+1)``-th realized cumulant of a sampled path is

    sum_j g_n(X_{t_j} - X_{t_{j-1}}),   X = (X^(1), ..., X^(n)),

which is realized variance for ``n = 1``, Neuberger's realized skewness for
``n = 2`` and Bae and Lee's realized kurtosis for ``n = 3``.  Its
expectation is the ``(n+1)``-th cumulant of the terminal value on any
partition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from itertools import combinations_with_replacement

import numpy as np

from .bell import g_eval
from .models.simulators import MartingaleModel
from .models.tree import CumulantTree, TreeModel, tree_backward_induction, tree_enumerate_paths
from .montecarlo import run_paths
from .paths import MultiPath, PathBatch
from .report import DEFAULT_Z_GATE, VerificationReport

EXACT_TOL = 1e-12

__all__ = [
    "RealizedStatistic",
    "realized_cumulant",
    "realized_cumulant_values",
    "batch_realized_cumulant",
    "expected_realized_cumulant_tree",
    "conditional_expected_realized_cumulant_tree",
    "aggregation_residual_tree",
    "aggregation_check_tree",
    "unbiasedness_mc",
]


@dataclass
class RealizedStatistic:
    """Value of a realized cumulant with its per-cell contributions."""

    order: int
    value: float
    contributions: np.ndarray
    grid: np.ndarray

    @property
    def n(self) -> int:
        return self.order - 1


def realized_cumulant_values(values, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized core: ``values`` of shape (..., N+1, k) with ``k >= n``.

    Returns ``(totals, contributions)`` with shapes ``(...)`` and ``(..., N)``.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim < 2:
        raise ValueError("values need a time axis and a component axis")
    if values.shape[-1] < n:
        raise ValueError(f"order n={n} needs {n} components, path has {values.shape[-1]}")
    if values.shape[-2] < 2:
        contributions = np.zeros(values.shape[:-2] + (0,))
        return contributions.sum(axis=-1), contributions
    inc = np.diff(values[..., :n], axis=-2)
    contributions = np.asarray(g_eval(n, inc))
    return contributions.sum(axis=-1), contributions


def realized_cumulant(path: MultiPath, n: int) -> RealizedStatistic:
    """The ``(n+1)``-th realized cumulant of ``path`` over its full grid.

    A single-point grid gives the empty sum, 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    total, contributions = realized_cumulant_values(path.values, n)
    return RealizedStatistic(n + 1, float(total), contributions, path.grid.copy())


def batch_realized_cumulant(batch: PathBatch, n: int) -> np.ndarray:
    """Per-path realized cumulants of a batch, shape (P,)."""
    return realized_cumulant_values(batch.values, n)[0]


def _check_tree_order(model: TreeModel, ct: CumulantTree | None, n: int) -> CumulantTree:
    if n < 1:
        raise ValueError("n must be >= 1")
    if ct is None:
        ct = tree_backward_induction(model, n + 1)
    elif ct.order < n + 1:
        raise ValueError(f"cumulant tree of order {ct.order} cannot support n={n}")
    return ct


def expected_realized_cumulant_tree(model: TreeModel, n: int, t_start: int = 0,
                                    partition=None, ct: CumulantTree | None = None) -> float:
    """Path-enumeration expectation of the realized cumulant on ``[t_start, depth]``.

    ``partition`` selects a subset of integer times (must include
    ``t_start`` and ``depth``); by default every time step is used.  With a
    single root this equals ``X^(n+1)`` at ``t_start`` averaged over the
    time-``t_start`` nodes, and the root cumulant for ``t_start = 0``.
    """
    ct = _check_tree_order(model, ct, n)
    if partition is None:
        partition = range(t_start, model.depth + 1)
    points = sorted(set(int(p) for p in partition))
    if not points or points[0] != t_start or points[-1] != model.depth:
        raise ValueError(f"partition must start at {t_start} and end at {model.depth}")
    total = 0.0
    for prob, path in tree_enumerate_paths(model, ct):
        total += prob * realized_cumulant(path.restrict(points=points), n).value
    return total


def _cell_expectation(model: TreeModel, ct: CumulantTree, n: int, a: int, b: int) -> np.ndarray:
    """``E[g_n(X_b - X_a) | node at a]`` for every node at time ``a``."""
    diff = ct.cumulants[b][None, :, :n] - ct.cumulants[a][:, None, :n]
    return np.einsum("ij,ij->i", model.reach(a, b), np.asarray(g_eval(n, diff)))


def conditional_expected_realized_cumulant_tree(model: TreeModel, n: int, t_start: int = 0,
                                                partition=None, ct: CumulantTree | None = None) -> np.ndarray:
    """Per-node ``E[realized cumulant on [t_start, depth] | node at t_start]``.

    Computed by propagating transition probabilities (no path enumeration);
    the identity to check is that it equals ``ct.cumulants[t_start][:, n]``.
    """
    ct = _check_tree_order(model, ct, n)
    if partition is None:
        partition = range(t_start, model.depth + 1)
    points = sorted(set(int(p) for p in partition))
    if points[0] != t_start or points[-1] != model.depth:
        raise ValueError(f"partition must start at {t_start} and end at {model.depth}")
    out = np.zeros(len(ct.cumulants[t_start]))
    for a, b in zip(points[:-1], points[1:]):
        out += model.reach(t_start, a) @ _cell_expectation(model, ct, n, a, b)
    return out


def aggregation_residual_tree(model: TreeModel, n: int, s: int, t: int, u: int,
                              ct: CumulantTree | None = None) -> np.ndarray:
    """Residual of the aggregation identity at each node of time ``s``.

    ``E[g(X_u - X_s)|F_s] - E[g(X_t - X_s)|F_s] - E[g(X_u - X_t)|F_s]``.
    """
    if not 0 <= s <= t <= u <= model.depth:
        raise ValueError(f"need 0 <= s <= t <= u <= {model.depth}, got ({s}, {t}, {u})")
    ct = _check_tree_order(model, ct, n)
    whole = _cell_expectation(model, ct, n, s, u)
    first = _cell_expectation(model, ct, n, s, t)
    second = model.reach(s, t) @ _cell_expectation(model, ct, n, t, u)
    return whole - first - second


def aggregation_check_tree(model: TreeModel, n: int, s: int, t: int, u: int,
                           ct: CumulantTree | None = None, tol: float = EXACT_TOL) -> VerificationReport:
    """Exact aggregation check; the estimate is the worst residual over time-``s`` nodes."""
    resid = aggregation_residual_tree(model, n, s, t, u, ct)
    return VerificationReport(
        name=f"aggregation g_{n} (s,t,u)=({s},{t},{u})",
        estimate=float(np.max(np.abs(resid))),
        target=0.0,
        n_samples=resid.size,
        abs_tol=tol,
        z=0.0,
    )


def aggregation_triples(depth: int):
    """All ``(s, t, u)`` with ``0 <= s <= t <= u <= depth``."""
    return list(combinations_with_replacement(range(depth + 1), 3))


def _realized_statistic(batch: PathBatch, n: int) -> dict:
    return {"realized": batch_realized_cumulant(batch, n)}


def unbiasedness_mc(model: MartingaleModel, n: int, n_paths: int, grid_size: int, seed: int,
                    z: float = DEFAULT_Z_GATE, workers: int = 1) -> VerificationReport:
    """Monte Carlo check that the mean realized cumulant hits ``kappa_{n+1}(X)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    res = run_paths(partial(_realized_statistic, n=n), model, n_paths, grid_size,
                    n_components=n + 1, seed=seed, workers=workers)
    target = float(model.cumulants_at_zero(n + 1)[n])
    return VerificationReport(
        name=f"unbiased realized cumulant order {n + 1} ({model.name})",
        estimate=res.mean("realized"),
        target=target,
        standard_error=res.standard_error("realized"),
        n_samples=res.n,
        z=z,
        details={"model": model.describe(), "n": n, "grid_size": grid_size, "seed": seed},
    )
