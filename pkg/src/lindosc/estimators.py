"""scikit-learn style front end for the propagators.

Every propagator is a transformer: ``fit`` validates the hyperparameters and
builds its caches, ``transform`` maps a stack of initial states ``(n, D, D)``
to their trajectories ``(n, len(times), D, D)``.  Hyperparameters follow the
usual estimator contract, so ``get_params``/``set_params``/``clone`` work.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .core import ModelParams
from .validation import ParameterError, check_dim, check_nonneg_int, check_operator_stack, check_times

LN2 = math.log(2.0)


class _Propagator(TransformerMixin, BaseEstimator):
    max_dim: int | None = None

    def _fit_common(self):
        self.params_ = ModelParams(self.omega, self.gamma, self.beta)
        self.dim_ = check_dim(self.dim, max_dim=self.max_dim)
        self.times_ = check_times(self.times)
        return self

    def fit(self, X=None, y=None):
        """Validate hyperparameters and precompute caches; ``X`` is only shape-checked."""
        self._fit_common()
        if X is not None:
            check_operator_stack(X, self.dim_)
        self._build()
        return self

    def _build(self):
        pass

    def transform(self, X) -> np.ndarray:
        """Trajectories of each initial state, shape ``(n, len(times), D, D)``."""
        check_is_fitted(self, "params_")
        stack = check_operator_stack(X, self.dim_)
        return np.array([self._trajectory(rho0) for rho0 in stack])

    def _trajectory(self, rho0) -> np.ndarray:
        return np.array([self._propagate(rho0, t) for t in self.times_])


class SpectralPropagator(_Propagator):
    """Mode sum over the closed-form eigenprojections with ``j <= j_max`` (default ``4 * dim``)."""

    def __init__(self, omega=1.0, gamma=1.0, beta=LN2, dim=40, times=(1.0,), j_max=None):
        self.omega = omega
        self.gamma = gamma
        self.beta = beta
        self.dim = dim
        self.times = times
        self.j_max = j_max

    def _build(self):
        from .spectral import SpectralBasis

        self.j_max_ = 4 * self.dim_ if self.j_max is None else check_nonneg_int("j_max", self.j_max)
        self.basis_ = SpectralBasis(self.params_, self.dim_, self.j_max_)

    def _trajectory(self, rho0):
        coeffs = self.basis_.coefficients(rho0)
        return np.array([self.basis_.propagate(rho0, t, coeffs) for t in self.times_])


class DisentangledPropagator(_Propagator):
    """Product-of-exponentials propagator."""

    def __init__(self, omega=1.0, gamma=1.0, beta=LN2, dim=40, times=(1.0,), buffer=8, form="auto"):
        self.omega = omega
        self.gamma = gamma
        self.beta = beta
        self.dim = dim
        self.times = times
        self.buffer = buffer
        self.form = form

    def _build(self):
        if self.form not in ("auto", "direct", "rescaled"):
            raise ParameterError("form", f"expected 'auto', 'direct' or 'rescaled', got {self.form!r}")

    def _propagate(self, rho0, t):
        from .disentangle import disentangled_propagate

        return disentangled_propagate(rho0, t, self.params_, self.dim_, self.buffer, self.form)


class ExpmPropagator(_Propagator):
    """Dense matrix-exponential reference (``dim <= 64``)."""

    max_dim = 64

    def __init__(self, omega=1.0, gamma=1.0, beta=LN2, dim=40, times=(1.0,)):
        self.omega = omega
        self.gamma = gamma
        self.beta = beta
        self.dim = dim
        self.times = times

    def _trajectory(self, rho0):
        from .oracle import expm_trajectory

        return expm_trajectory(rho0, self.times_, self.params_, self.dim_)


class LadderPropagator(_Propagator):
    """Mode sum over ladder-built eigenstates with ``m + n <= order_max`` (default ``dim // 4``)."""

    def __init__(self, omega=1.0, gamma=1.0, beta=LN2, dim=40, times=(1.0,), order_max=None):
        self.omega = omega
        self.gamma = gamma
        self.beta = beta
        self.dim = dim
        self.times = times
        self.order_max = order_max

    def _build(self):
        self.order_max_ = self.dim_ // 4 if self.order_max is None else check_nonneg_int("order_max", self.order_max)
        if 4 * self.order_max_ > self.dim_:
            raise ParameterError("order_max", f"needs 4 * order_max <= dim, got {self.order_max_} with dim {self.dim_}")

    def _propagate(self, rho0, t):
        from .ladder import ladder_propagate

        return ladder_propagate(rho0, t, self.order_max_, self.params_, self.dim_)


PROPAGATORS = {
    "spectral": SpectralPropagator,
    "disentangled": DisentangledPropagator,
    "oracle": ExpmPropagator,
    "ladder": LadderPropagator,
}
