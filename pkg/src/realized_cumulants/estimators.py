"""scikit-learn compatible wrappers.

Path arrays follow the batch layout ``(n_paths, n_points, n_components)``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .bell import N_MAX
from .cumulants import cumulants_to_moments, moments_to_cumulants
from .realized import realized_cumulant_values


class RealizedCumulant(TransformerMixin, BaseEstimator):
    """Map each path to its ``(order+1)``-th realized cumulant.

    Parameters
    ----------
    order : int, default=1
        The kernel index ``n``: 1 gives realized variance, 2 realized
        skewness, 3 realized kurtosis.  Paths need at least ``order``
        components.

    Examples
    --------
    >>> import numpy as np
    >>> X = np.array([[[0.0], [1.0], [-1.0]]])
    >>> RealizedCumulant(order=1).fit_transform(X)
    array([[5.]])
    """

    def __init__(self, order=1):
        self.order = order

    def _validate(self, X, reset):
        X = check_array(X, allow_nd=True, ensure_min_features=1, dtype=float)
        if X.ndim == 2:
            X = X[:, :, None]
        if X.ndim != 3:
            raise ValueError("expected paths of shape (n_paths, n_points, n_components)")
        if reset:
            self.n_components_ = X.shape[2]
        elif X.shape[2] != self.n_components_:
            raise ValueError(f"fitted on {self.n_components_} components, got {X.shape[2]}")
        return X

    def fit(self, X, y=None):
        if not (isinstance(self.order, (int, np.integer)) and 1 <= self.order < N_MAX):
            raise ValueError(f"order must be an integer in 1..{N_MAX - 1}")
        X = self._validate(X, reset=True)
        if X.shape[2] < self.order:
            raise ValueError(f"order={self.order} needs {self.order} components, got {X.shape[2]}")
        return self

    def transform(self, X):
        check_is_fitted(self, "n_components_")
        X = self._validate(X, reset=False)
        return realized_cumulant_values(X, self.order)[0][:, None]


class MomentCumulantTransformer(TransformerMixin, BaseEstimator):
    """Row-wise conversion between raw moments and cumulants.

    ``direction="m2c"`` maps moment rows to cumulant rows and
    ``"c2m"`` the reverse; :meth:`inverse_transform` undoes either.
    """

    def __init__(self, direction="m2c"):
        self.direction = direction

    def fit(self, X, y=None):
        if self.direction not in ("m2c", "c2m"):
            raise ValueError("direction must be 'm2c' or 'c2m'")
        X = check_array(X, dtype=float)
        self.n_features_in_ = X.shape[1]
        return self

    def _apply(self, X, direction):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} orders, got {X.shape[1]}")
        fn = moments_to_cumulants if direction == "m2c" else cumulants_to_moments
        return fn(X)

    def transform(self, X):
        return self._apply(X, self.direction)

    def inverse_transform(self, X):
        return self._apply(X, "c2m" if self.direction == "m2c" else "m2c")
