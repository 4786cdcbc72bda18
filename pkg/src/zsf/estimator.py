"""scikit-learn style wrappers around the zero-subspace machinery.

``fit`` takes a state-space system (a :class:`~zsf.sysmodel.StateSpace`,
an ``(A, B, C[, D])`` tuple or anything with ``A``, ``B``, ``C`` attributes).
Tolerances are constructor parameters, so ``get_params``/``set_params``
and ``sklearn.base.clone`` work as usual.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .matcore import Tolerances
from .sysmodel import check_system
from .zerosolver import RosenbrockPencil, generic_rank, invariant_zeros, rank_drop_test
from .zsform import transform

__all__ = ["ZeroSubspaceTransformer", "InvariantZeros"]


class _TolerancesMixin:
    def _tolerances(self) -> Tolerances:
        return Tolerances(rank_rtol=self.rank_rtol, zero_atol=self.zero_atol,
                          match_tol=self.match_tol)


class ZeroSubspaceTransformer(_TolerancesMixin, BaseEstimator):
    """Learn the zero-subspace coordinates ``[eta; xi] = T x`` of a system.

    Attributes
    ----------
    form_ : ZeroSubspaceForm
    T_, S_ : ndarray
        The transformation and its inverse.
    l_z_ : int
        Number of internal (``eta``) coordinates.
    n_features_in_ : int
        Number of states.

    Examples
    --------
    >>> from zsf.sysmodel import controllable_canonical
    >>> zst = ZeroSubspaceTransformer().fit(
    ...     controllable_canonical([1, -9, 8], [1, 11, 36, 36]))
    >>> zst.l_z_
    2
    """

    def __init__(self, rank_rtol=None, zero_atol=1e-9, match_tol=1e-6):
        self.rank_rtol = rank_rtol
        self.zero_atol = zero_atol
        self.match_tol = match_tol

    def fit(self, X, y=None):
        sys = check_system(X)
        self.form_ = transform(sys, self._tolerances())
        self.T_ = self.form_.T
        self.S_ = self.form_.S
        self.l_z_ = self.form_.l_z
        self.n_features_in_ = sys.nstates
        return self

    def transform(self, X):
        """Map state samples (rows of ``X``) to ``[eta, xi]`` coordinates."""
        check_is_fitted(self, "T_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X @ self.T_.T

    def inverse_transform(self, Z):
        check_is_fitted(self, "S_")
        Z = check_array(Z)
        if Z.shape[1] != self.n_features_in_:
            raise ValueError(f"Z has {Z.shape[1]} features, expected {self.n_features_in_}")
        return Z @ self.S_.T

    def split(self, Z):
        """Split transformed samples into ``(eta, xi)``."""
        Z = np.asarray(Z)
        return Z[:, : self.l_z_], Z[:, self.l_z_:]


class InvariantZeros(_TolerancesMixin, BaseEstimator):
    """Invariant-zero estimator.

    ``fit`` computes the zero set; ``predict`` reports, for arbitrary complex
    points, whether the Rosenbrock matrix of the fitted system loses rank
    there.
    """

    def __init__(self, rank_rtol=None, zero_atol=1e-9, match_tol=1e-6):
        self.rank_rtol = rank_rtol
        self.zero_atol = zero_atol
        self.match_tol = match_tol

    def fit(self, X, y=None):
        sys = check_system(X)
        tol = self._tolerances()
        self.system_ = sys
        self.zero_set_ = invariant_zeros(sys, tol)
        self.zeros_ = self.zero_set_.zeros.expanded()
        self.candidates_ = self.zero_set_.candidates.expanded()
        self.shape_ = self.zero_set_.shape
        self.extended_ = self.zero_set_.extended
        self.pencil_ = RosenbrockPencil(sys)
        self.generic_rank_ = generic_rank(self.pencil_, tol, avoid=self.zeros_)
        self.n_features_in_ = sys.nstates
        return self

    def predict(self, X):
        """Boolean array: is each complex point in ``X`` a rank-drop point?"""
        check_is_fitted(self, "zero_set_")
        lam = np.asarray(X, dtype=complex).ravel()
        if not np.all(np.isfinite(lam)):
            raise ValueError("points must be finite")
        tol = self._tolerances()
        return np.array([
            rank_drop_test(self.pencil_, z, tol, nominal=self.generic_rank_).drops
            for z in lam
        ], dtype=bool)
