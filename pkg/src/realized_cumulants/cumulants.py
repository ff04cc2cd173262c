"""Moment <-> cumulant conversion through complete Bell polynomials.

Moment and cumulant vectors are plain float arrays whose last axis holds
orders ``1..n``; leading axes are broadcast so a whole grid of conditional
moment vectors converts in one call.
"""

from __future__ import annotations

import numpy as np

from .bell import N_MAX, _check_order, bell_sequence

__all__ = [
    "cumulants_to_moments",
    "moments_to_cumulants",
    "conditional_cumulants_from_moments",
]


def _as_vectors(v, n_max):
    v = np.asarray(v, dtype=float)
    if v.ndim == 0 or v.shape[-1] == 0:
        raise ValueError("expected a non-empty vector of orders 1..n")
    _check_order(v.shape[-1], n_max)
    return v


def cumulants_to_moments(kappa, n_max: int | None = None) -> np.ndarray:
    """Raw moments ``m_j = B_j(kappa_1, ..., kappa_j)`` for ``j = 1..n``."""
    kappa = _as_vectors(kappa, n_max)
    seq = bell_sequence(kappa, n_max)
    return np.stack(seq[1:], axis=-1)


def moments_to_cumulants(m, n_max: int | None = None, *, check_variance: bool = False) -> np.ndarray:
    """Cumulants from raw moments by ``kappa_n = m_n - B_n(kappa_1..kappa_{n-1}, 0)``.

    Parameters
    ----------
    m : array_like, shape (..., n)
        Raw moments ``E[X], ..., E[X^n]`` (possibly conditional).
    n_max : int, optional
        Capacity bound, defaults to :data:`~realized_cumulants.bell.N_MAX`.
    check_variance : bool, default False
        Require ``m_2 >= m_1**2`` (up to round-off).  Leave off for
        node-level intermediate data.
    """
    if n_max is None:
        n_max = N_MAX
    m = _as_vectors(m, n_max)
    n = m.shape[-1]
    if check_variance and n >= 2:
        var = m[..., 1] - m[..., 0] ** 2
        scale = np.maximum(np.abs(m[..., 1]), 1.0)
        if np.any(var < -1e-12 * scale):
            raise ValueError("moment vector has negative variance")
    kappa = np.zeros_like(m)
    kappa[..., 0] = m[..., 0]
    for j in range(2, n + 1):
        # B_j evaluated with kappa_j set to 0 (kappa[..., j-1] still holds 0)
        kappa[..., j - 1] = m[..., j - 1] - bell_sequence(kappa[..., :j], n_max)[-1]
    return kappa


def conditional_cumulants_from_moments(node_moments, n_max: int | None = None) -> np.ndarray:
    """Conditional cumulants ``X^{(k)}_G`` from conditional moments ``E[X^k | G]``.

    Same contract as :func:`moments_to_cumulants`; the separate name marks
    call sites that feed filtration-node moments.
    """
    return moments_to_cumulants(node_moments, n_max)
