"""Verification suites shared by the CLI and the acceptance tests.

Each suite returns a list of :class:`VerificationReport`.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .bell import bell_eval, bell_numbers, bell_terms, evaluate_terms, g_eval
from .cumulants import cumulants_to_moments, moments_to_cumulants
from .models.simulators import MartingaleModel
from .models.tree import TreeModel, increment_bell_residuals, tree_backward_induction
from .realized import (
    EXACT_TOL,
    aggregation_check_tree,
    aggregation_triples,
    conditional_expected_realized_cumulant_tree,
    expected_realized_cumulant_tree,
    unbiasedness_mc,
)
from .recursion import recursion_check
from .report import DEFAULT_Z_GATE, VerificationReport

IDENTITY_TOL = 1e-10

__all__ = [
    "bell_identity_suite",
    "conversion_suite",
    "tree_suite",
    "aggregation_suite",
    "unbiased_suite",
    "recursion_suite",
]


def _rel_err(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), np.finfo(float).tiny)))


def _exact(name, worst, tol=IDENTITY_TOL, n=0, **details) -> VerificationReport:
    return VerificationReport(name=name, estimate=float(worst), target=0.0, n_samples=n,
                              z=0.0, abs_tol=tol, details=details)


def bell_identity_suite(seed: int = 0, n_inputs: int = 100, max_order: int = 8) -> list[VerificationReport]:
    """Binomial relation, decomposition, homogeneity, oracle equivalence, Bell numbers.

    Inputs are drawn from [0.5, 2] so every monomial is positive and the
    relative error is well conditioned.
    """
    rng = np.random.default_rng(seed)
    binom_w = decomp_w = homog_w = oracle_w = 0.0
    for n in range(1, max_order + 1):
        x = rng.uniform(0.5, 2.0, (n_inputs, n))
        y = rng.uniform(0.5, 2.0, (n_inputs, n))
        lhs = bell_eval(x + y)
        rhs = sum(comb(n, j) * (bell_eval(x[:, : n - j]) if n - j else 1.0)
                  * (bell_eval(y[:, :j]) if j else 1.0) for j in range(n + 1))
        binom_w = max(binom_w, _rel_err(lhs, rhs))

        direct = bell_eval(x)
        split = x[:, -1] + (g_eval(n - 1, x[:, :-1]) if n > 1 else 0.0)
        decomp_w = max(decomp_w, _rel_err(split, direct))

        lam = rng.uniform(0.5, 2.0, (n_inputs, 1))
        scaled = bell_eval(x * lam ** np.arange(1, n + 1))
        homog_w = max(homog_w, _rel_err(scaled, lam[:, 0] ** n * direct))

        oracle_w = max(oracle_w, _rel_err(direct, evaluate_terms(bell_terms(n), x)))

    expected = [1, 2, 5, 15, 52, 203]
    got = bell_numbers(6)
    mismatches = sum(a != b for a, b in zip(got, expected))
    count = n_inputs * max_order
    return [
        _exact("bell binomial relation", binom_w, n=count),
        _exact("bell decomposition B_n = g_{n-1} + x_n", decomp_w, n=count),
        _exact("bell homogeneity", homog_w, n=count),
        _exact("bell recurrence vs partition oracle", oracle_w, n=count),
        _exact("bell number coefficient sums", mismatches, tol=0.0, n=6, got=got, expected=expected),
    ]


def conversion_suite(seed: int = 0, n_inputs: int = 100, max_order: int = 8) -> list[VerificationReport]:
    """Moment/cumulant round trips plus the Poisson(1) and standard normal oracles."""
    rng = np.random.default_rng(seed)
    worst_c = worst_m = 0.0
    for n in range(1, max_order + 1):
        kappa = rng.uniform(-1.0, 1.0, (n_inputs, n))
        kappa[:, 1:2] = np.abs(kappa[:, 1:2]) + 0.5
        m = cumulants_to_moments(kappa)
        worst_c = max(worst_c, np.max(np.abs(moments_to_cumulants(m) - kappa) / np.maximum(np.abs(kappa), 1.0)))
        m_scale = np.maximum(np.abs(m), 1.0)
        worst_m = max(worst_m, np.max(np.abs(cumulants_to_moments(moments_to_cumulants(m)) - m) / m_scale))
    fixed = [
        ("poisson(1) m2c", moments_to_cumulants([1, 2, 5]), [1, 1, 1]),
        ("poisson(1) c2m", cumulants_to_moments([1, 1, 1]), [1, 2, 5]),
        ("normal m2c", moments_to_cumulants([0, 1, 0, 3]), [0, 1, 0, 0]),
        ("normal c2m", cumulants_to_moments([0, 1, 0, 0]), [0, 1, 0, 3]),
    ]
    reports = [
        _exact("cumulant round trip c->m->c", worst_c, n=n_inputs * max_order),
        _exact("moment round trip m->c->m", worst_m, n=n_inputs * max_order),
    ]
    for name, got, want in fixed:
        err = np.max(np.abs(np.asarray(got) - want) / np.maximum(np.abs(want), 1.0))
        reports.append(_exact(name, err, got=np.asarray(got).tolist()))
    return reports


def tree_suite(model: TreeModel, max_order: int = 4, tol: float = EXACT_TOL) -> list[VerificationReport]:
    """Zero-mean Bell increments, cumulant consistency and partition invariance on a tree."""
    ct = tree_backward_induction(model, max_order)
    reports = []
    for k, worst in enumerate(increment_bell_residuals(model, ct), start=1):
        reports.append(_exact(f"tree E[B_{k}(X_u - X_t) | F_t] = 0", worst, tol=tol))
    worst = 0.0
    for t in range(model.depth + 1):
        recon = cumulants_to_moments(ct.cumulants[t])
        worst = max(worst, float(np.max(np.abs(recon - ct.moments[t]))))
    reports.append(_exact("tree moments = B_k(conditional cumulants)", worst, tol=tol))
    for n in range(1, max_order):
        root = ct.cumulants[0][:, n]
        for t_start in range(model.depth + 1):
            cond = conditional_expected_realized_cumulant_tree(model, n, t_start, ct=ct)
            reports.append(_exact(
                f"tree E[realized order {n + 1} on [{t_start},N] | F_{t_start}] = X^({n + 1})_{t_start}",
                np.max(np.abs(cond - ct.cumulants[t_start][:, n])), tol=tol))
        expected = float(model.initial @ root)
        enum = expected_realized_cumulant_tree(model, n, ct=ct)
        reports.append(VerificationReport(
            name=f"tree expected realized order {n + 1} (path enumeration)",
            estimate=enum, target=expected, z=0.0, abs_tol=tol, n_samples=model.n_paths()))
    return reports


def aggregation_suite(model: TreeModel, order: int, tol: float = EXACT_TOL) -> list[VerificationReport]:
    """Aggregation identity for ``g_1..g_order`` on every ``(s, t, u)`` triple."""
    reports = []
    for n in range(1, order + 1):
        ct = tree_backward_induction(model, n + 1)
        for s, t, u in aggregation_triples(model.depth):
            reports.append(aggregation_check_tree(model, n, s, t, u, ct=ct, tol=tol))
    return reports


def unbiased_suite(model: MartingaleModel, order: int, n_paths: int, grid_size: int, seed: int,
                   z: float = DEFAULT_Z_GATE, workers: int = 1) -> list[VerificationReport]:
    return [unbiasedness_mc(model, order, n_paths, grid_size, seed, z=z, workers=workers)]


def recursion_suite(model: MartingaleModel, order: int, n_paths: int, grid_size: int, seed: int,
                    z: float = DEFAULT_Z_GATE, bias_constant: float | None = None,
                    workers: int = 1) -> list[VerificationReport]:
    return [recursion_check(model, order, n_paths, grid_size, seed, z=z,
                            bias_constant=bias_constant, workers=workers)]
