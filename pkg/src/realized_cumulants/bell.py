"""Complete Bell polynomials and the realized-cumulant kernels ``g_n``.

Evaluation uses the Leibniz recurrence

    B_{m+1}(x) = sum_{k=0}^{m} C(m, k) B_{m-k}(x) x_{k+1},   B_0 = 1,

which costs O(n^2) and yields every lower order on the way.  The explicit
term expansion from integer partitions is kept as an exact oracle.

All evaluators broadcast over leading axes: an input of shape ``(..., n)``
gives an output of shape ``(...)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, NamedTuple

import numpy as np

from .exceptions import CapacityError

N_MAX = 12
INT64_MAX = 2**63 - 1

__all__ = [
    "N_MAX",
    "BellTerm",
    "bell_eval",
    "bell_sequence",
    "bell_terms",
    "evaluate_terms",
    "g_eval",
    "integer_partitions",
    "quadratic_part_coefficients",
    "bell_numbers",
]


class BellTerm(NamedTuple):
    """One monomial ``coefficient * prod_i x_i ** exponents[i]`` of B_n."""

    coefficient: int
    exponents: dict[int, int]

    @property
    def weighted_degree(self) -> int:
        return sum(i * e for i, e in self.exponents.items())

    @property
    def degree(self) -> int:
        return sum(self.exponents.values())


def _check_order(n: int, n_max: int | None, *, lo: int = 1) -> int:
    if n_max is None:
        n_max = N_MAX
    if int(n) != n:
        raise ValueError(f"order must be an integer, got {n!r}")
    n = int(n)
    if n < lo:
        raise ValueError(f"order must be >= {lo}, got {n}")
    if n > n_max:
        raise CapacityError(f"order {n} exceeds n_max={n_max}")
    return n


@lru_cache(maxsize=None)
def _binomial_table(n: int) -> np.ndarray:
    table = np.zeros((n + 1, n + 1))
    for m in range(n + 1):
        for k in range(m + 1):
            c = comb(m, k)
            if c > INT64_MAX:
                raise CapacityError(f"C({m},{k}) overflows 64-bit integers")
            table[m, k] = c
    return table


def bell_sequence(x, n_max: int | None = None) -> list[np.ndarray]:
    """Return ``[B_0, B_1(x_1), ..., B_n(x_1..x_n)]`` for ``x`` of shape (..., n).

    ``B_j`` only reads the first ``j`` entries, so a single pass gives
    every prefix order.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        raise ValueError("entries must have at least one axis")
    n = x.shape[-1]
    if n == 0:
        return [np.ones(x.shape[:-1])]
    _check_order(n, n_max)
    binom = _binomial_table(n)
    out = [np.ones(x.shape[:-1])]
    for m in range(n):
        acc = np.zeros(x.shape[:-1])
        for k in range(m + 1):
            acc = acc + binom[m, k] * out[m - k] * x[..., k]
        out.append(acc)
    return out


def bell_eval(x, n_max: int | None = None):
    """Evaluate the complete Bell polynomial ``B_n`` where ``n = len(x)``.

    Parameters
    ----------
    x : array_like, shape (..., n)
        Entries ``x_1, ..., x_n``.  Leading axes are broadcast.
    n_max : int, optional
        Capacity bound on ``n``; defaults to :data:`N_MAX`.

    Returns
    -------
    float or ndarray
        ``B_n(x)``; a Python float for one-dimensional input.

    Raises
    ------
    CapacityError
        If ``n`` exceeds ``n_max``.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise ValueError("bell_eval needs an order n >= 1 input vector")
    val = bell_sequence(x, n_max)[-1]
    return float(val) if val.ndim == 0 else val


def g_eval(n: int, dx, n_max: int | None = None):
    """Evaluate ``g_n(dx) = B_{n+1}(dx_1, ..., dx_n, 0)``.

    ``dx`` has shape ``(..., n)``; this is the per-cell kernel of the
    ``(n+1)``-th realized cumulant.
    """
    if n_max is None:
        n_max = N_MAX
    n = _check_order(n, n_max - 1)
    dx = np.asarray(dx, dtype=float)
    if dx.ndim == 0 or dx.shape[-1] != n:
        raise ValueError(f"g_{n} expects {n} components, got shape {dx.shape}")
    padded = np.concatenate([dx, np.zeros(dx.shape[:-1] + (1,))], axis=-1)
    return bell_eval(padded, n_max)


def integer_partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield the partitions of ``n`` as non-increasing tuples of parts."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def bell_terms(n: int, n_max: int | None = None) -> list[BellTerm]:
    """Exact monomial expansion of ``B_n``.

    The coefficient of ``prod_i x_i^{e_i}`` is ``n! / prod_i (i!)^{e_i} e_i!``,
    one term per integer partition of ``n`` (``e_i`` = multiplicity of part i).
    """
    n = _check_order(n, n_max)
    terms = []
    for parts in integer_partitions(n):
        exps: dict[int, int] = {}
        for p in parts:
            exps[p] = exps.get(p, 0) + 1
        denom = 1
        for i, e in exps.items():
            denom *= factorial(i) ** e * factorial(e)
        coef, rem = divmod(factorial(n), denom)
        assert rem == 0
        if coef > INT64_MAX:
            raise CapacityError(f"B_{n} coefficient overflows 64-bit integers")
        terms.append(BellTerm(coef, dict(sorted(exps.items()))))
    return terms


def evaluate_terms(terms: list[BellTerm], x):
    """Evaluate a term expansion at ``x`` (shape ``(..., n)``)."""
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape[:-1])
    for term in terms:
        mono = np.full(x.shape[:-1], float(term.coefficient))
        for i, e in term.exponents.items():
            mono = mono * x[..., i - 1] ** e
        total = total + mono
    return float(total) if total.ndim == 0 else total


def bell_numbers(n: int) -> list[int]:
    """Bell numbers ``B_1(1), ..., B_n(1, ..., 1)`` from the term expansion."""
    return [sum(t.coefficient for t in bell_terms(k, max(n, N_MAX))) for k in range(1, n + 1)]


def quadratic_part_coefficients(n: int, n_max: int | None = None) -> dict[tuple[int, int], Fraction]:
    """Coefficients of the degree-two monomials of ``B_{n+1}``.

    Returns ``{(n+1-j, j): C(n+1, j) / 2}`` for ``j = 1..n``.  Symmetric
    pairs are listed separately, so ``(1, 2)`` and ``(2, 1)`` each carry
    half of the ``3 x_1 x_2`` term of ``B_3``.
    """
    if n_max is None:
        n_max = N_MAX
    n = _check_order(n, n_max - 1)
    return {(n + 1 - j, j): Fraction(comb(n + 1, j), 2) for j in range(1, n + 1)}
