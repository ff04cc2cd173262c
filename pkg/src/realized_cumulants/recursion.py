"""High-frequency limit of realized cumulants: the cumulant recursion.

As the mesh goes to zero, the ``(n+1)``-th realized cumulant on ``[t, T]``
tends to

    sum_{s in (t,T]} g_n(dX_s) + 1/2 sum_{j=1}^n C(n+1, j) <X^(n+1-j),c, X^(j),c>_{t,T}

so ``X^(n+1)_t`` is the conditional expectation of that expression.  Here
the continuous parts are obtained by removing the simulator's exact jump
marks cell by cell; no statistical jump detection is attempted.
"""

from __future__ import annotations

from fractions import Fraction
from functools import partial
from math import comb, factorial

import numpy as np

from .bell import g_eval, quadratic_part_coefficients
from .models.simulators import MartingaleModel
from .montecarlo import run_paths
from .paths import MultiPath, PathBatch
from .report import DEFAULT_Z_GATE, VerificationReport

# C in the discretization allowance C / grid_size, about 2x the bias found by
# calibrate_bias_constant (poisson, lam = T = 1: 3 at n=2, 7 at n=3) or by
# hand where the pilot is too noisy (expmart n=2: -E sum dM^3 ~ -(e^3 - 1)/N).
DEFAULT_BIAS_CONSTANTS = {
    "brownian": 1.0,
    "poisson": 14.0,
    "expmart": 40.0,
}

__all__ = [
    "DEFAULT_BIAS_CONSTANTS",
    "realized_covariation",
    "batch_realized_covariation",
    "jump_term",
    "batch_jump_term",
    "recursion_rhs",
    "recursion_terms",
    "batch_recursion_terms",
    "recursion_check",
    "calibrate_bias_constant",
    "diamond_scaling",
]


def _as_batch(path: MultiPath, t_start) -> PathBatch:
    if t_start is not None:
        if not np.any(path.grid == t_start):
            raise ValueError(f"t_start={t_start} is not a grid time")
        path = path.restrict(t_start)
    return PathBatch.from_paths([path])


def _check_component(batch: PathBatch, *idx: int) -> None:
    for i in idx:
        if not 1 <= i <= batch.n_components:
            raise ValueError(f"component {i} not in 1..{batch.n_components}")


def batch_realized_covariation(batch: PathBatch, i: int, j: int, continuous_part: bool = False) -> np.ndarray:
    """Per-path ``sum_cells dX^(i) dX^(j)``, shape (P,).

    With ``continuous_part`` the jump marks inside each cell are removed
    from both increments first.
    """
    _check_component(batch, i, j)
    inc = np.diff(batch.values[:, :, [i - 1, j - 1]], axis=1)
    if continuous_part:
        if not batch.has_marks:
            raise ValueError("continuous part requested but the path carries no jump marks")
        inc = inc - batch.cell_jump_totals()[:, :, [i - 1, j - 1]]
    return np.sum(inc[:, :, 0] * inc[:, :, 1], axis=1)


def realized_covariation(path: MultiPath, i: int, j: int, continuous_part: bool = False,
                         t_start: float | None = None) -> float:
    """Realized covariation of ``X^(i)`` and ``X^(j)`` over ``[t_start, T]``."""
    return float(batch_realized_covariation(_as_batch(path, t_start), i, j, continuous_part)[0])


def batch_jump_term(batch: PathBatch, n: int) -> np.ndarray:
    """Per-path ``sum over marks of g_n(jump)``, shape (P,)."""
    if not batch.has_marks:
        raise ValueError("jump term needs jump marks")
    if batch.n_components < n:
        raise ValueError(f"g_{n} needs {n} components")
    if batch.mark_path.size == 0:
        return np.zeros(len(batch))
    contrib = np.asarray(g_eval(n, batch.mark_jump[:, :n])).reshape(-1)
    return np.bincount(batch.mark_path, weights=contrib, minlength=len(batch))


def jump_term(path: MultiPath, n: int, t_start: float | None = None) -> float:
    """``sum_{s in (t_start, T]} g_n(dX_s)`` over the recorded jump marks.

    ``t_start`` defaults to the first grid time.
    """
    if path.jump_marks is None:
        raise ValueError("jump term needs jump marks")
    return float(batch_jump_term(_as_batch(path, t_start), n)[0])


def _bracket_weights(n: int) -> list[tuple[int, int, float]]:
    return [(a, b, float(c)) for (a, b), c in quadratic_part_coefficients(n).items()]


def batch_recursion_terms(batch: PathBatch, n: int) -> dict[str, np.ndarray]:
    """Per-path jump sum, continuous bracket sum and their total."""
    if batch.n_components < n:
        raise ValueError(f"order n={n} needs {n} components")
    jumps = batch_jump_term(batch, n)
    bracket = np.zeros(len(batch))
    for a, b, w in _bracket_weights(n):
        bracket += w * batch_realized_covariation(batch, a, b, continuous_part=True)
    return {"jump": jumps, "bracket": bracket, "rhs": jumps + bracket}


def recursion_terms(path: MultiPath, n: int, t_start: float | None = None) -> dict[str, float]:
    if path.jump_marks is None:
        raise ValueError("recursion terms need jump marks (possibly empty)")
    terms = batch_recursion_terms(_as_batch(path, t_start), n)
    return {k: float(v[0]) for k, v in terms.items()}


def recursion_rhs(path: MultiPath, n: int, t_start: float | None = None) -> float:
    """Jump sum plus weighted continuous brackets on ``[t_start, T]``.

    Its conditional expectation is ``X^(n+1)_{t_start}`` in the mesh limit.
    """
    return recursion_terms(path, n, t_start)["rhs"]


def _recursion_statistic(batch: PathBatch, n: int) -> dict:
    return batch_recursion_terms(batch, n)


def recursion_check(model: MartingaleModel, n: int, n_paths: int, grid_size: int, seed: int,
                    z: float = DEFAULT_Z_GATE, bias_constant: float | None = None,
                    workers: int = 1) -> VerificationReport:
    """Monte Carlo mean of :func:`recursion_rhs` at ``t = 0`` against ``X^(n+1)_0``.

    Passes when within ``z * SE + bias_constant / grid_size``; the second
    term absorbs the discretization bias of realized brackets.
    """
    if bias_constant is None:
        bias_constant = DEFAULT_BIAS_CONSTANTS.get(model.name, 0.0)
    res = run_paths(partial(_recursion_statistic, n=n), model, n_paths, grid_size,
                    n_components=n, seed=seed, workers=workers)
    target = float(model.cumulants_at_zero(n + 1)[n])
    return VerificationReport(
        name=f"recursion order {n + 1} ({model.name})",
        estimate=res.mean("rhs"),
        target=target,
        standard_error=res.standard_error("rhs"),
        n_samples=res.n,
        z=z,
        bias_allowance=bias_constant / grid_size,
        details={
            "model": model.describe(),
            "n": n,
            "grid_size": grid_size,
            "seed": seed,
            "jump_subtotal": res.mean("jump"),
            "bracket_subtotal": res.mean("bracket"),
            "bias_constant": bias_constant,
        },
    )


def calibrate_bias_constant(model: MartingaleModel, n: int, n_paths: int, grid_size: int,
                            seed: int, workers: int = 1) -> dict[str, float]:
    """Grid-doubling pilot for the ``C / grid`` bias of :func:`recursion_rhs`.

    With mean ``mu(N) ~ target + C/N``, ``C ~ 2N (mu(N) - mu(2N))``.  Also
    reports the direct estimate ``N (mu(N) - target)``.
    """
    stat = partial(_recursion_statistic, n=n)
    coarse = run_paths(stat, model, n_paths, grid_size, n, seed, workers)
    fine = run_paths(stat, model, n_paths, 2 * grid_size, n, seed, workers)
    target = float(model.cumulants_at_zero(n + 1)[n])
    mu_n, mu_2n = coarse.mean("rhs"), fine.mean("rhs")
    return {
        "doubling": 2 * grid_size * (mu_n - mu_2n),
        "direct": grid_size * (mu_n - target),
        "se_direct": grid_size * coarse.standard_error("rhs"),
    }


def diamond_scaling(n: int) -> list[Fraction]:
    """Rescaling factors taking the bracket form to the ``Y = X / j!`` form.

    Substituting ``x_j = j! y_j`` in ``C(n+1, j) x_{n+1-j} x_j`` and dividing
    by ``(n+1)!`` leaves ``factor_j * y_{n+1-j} y_j``; every factor is 1,
    which is why the ``Y`` recursion carries a bare 1/2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return [
        Fraction(comb(n + 1, j) * factorial(n + 1 - j) * factorial(j), factorial(n + 1))
        for j in range(1, n + 1)
    ]
