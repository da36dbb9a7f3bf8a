"""scikit-learn style front end: ``fit`` builds the solution, ``predict`` evaluates fields."""
from __future__ import annotations

import math
import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import BWHError, ConfigError, ShadowBoundaryWarning
from .farfield import FAR_METHODS, far_field
from .incident import incident_far, source_spec
from .medium import MediumParams, derive_medium, propagation_context
from .solver import scattered_field, solve, transverse_components


class HalfPlaneDiffraction(BaseEstimator):
    """Line source diffracted by a conducting half-plane in a bi-isotropic medium.

    Parameters mirror the run configuration.  ``phi0`` is in radians.
    ``wave`` selects the left- (1) or right-handed (2) Beltrami partial wave.

    >>> est = HalfPlaneDiffraction().fit()
    >>> est.predict([[0.5, 0.5]]).shape
    (1,)
    """

    def __init__(self, epsilon=1.0, mu=1.0, alpha=1 / 12, beta=1 / 12, omega=12 / 7, ky=1.0,
                 loss=0.02, r0=1000.0, phi0=-0.75 * math.pi, kernel_tol=1e-10, tol=1e-8, wave=1):
        self.epsilon = epsilon
        self.mu = mu
        self.alpha = alpha
        self.beta = beta
        self.omega = omega
        self.ky = ky
        self.loss = loss
        self.r0 = r0
        self.phi0 = phi0
        self.kernel_tol = kernel_tol
        self.tol = tol
        self.wave = wave

    def fit(self, X=None, y=None):
        """Factorise the kernel and assemble the spectral solution; ``X`` and ``y`` are ignored."""
        if self.wave not in (1, 2):
            raise ConfigError("wave must be 1 or 2")
        params = MediumParams(self.epsilon, self.mu, self.alpha, self.beta, self.omega)
        self.medium_ = derive_medium(params)
        ctx = propagation_context(self.medium_, self.ky, self.loss)
        self.context_ = ctx.mirrored() if self.wave == 2 else ctx
        self.source_ = source_spec(self.context_, r0=self.r0, phi0=self.phi0)
        self.solution_ = solve(self.context_, self.source_, tol=self.kernel_tol)
        return self

    def _points(self, X):
        check_is_fitted(self, "solution_")
        return check_array(X, dtype=float, ensure_min_samples=0).reshape(-1, 2) if np.size(X) else np.empty((0, 2))

    def predict(self, X, part="total"):
        """Field at rows ``(x, z)`` of ``X``; ``part`` is total, scattered or incident.

        Points where the quadrature fails come back as NaN.
        """
        P = self._points(X)
        if part not in ("total", "scattered", "incident"):
            raise ConfigError(f"unknown field part {part!r}")
        out = np.empty(len(P), dtype=complex)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ShadowBoundaryWarning)
            for i, (x, z) in enumerate(P):
                try:
                    val = 0j
                    if part != "incident":
                        val += scattered_field(x, z, self.solution_, self.tol)
                    if part != "scattered":
                        val += incident_far(x, z, self.source_)
                    out[i] = val
                except BWHError:
                    out[i] = complex("nan+nanj")
        return out

    def predict_transverse(self, X):
        """(Qx, Qz) of the total field, shape (n, 2)."""
        P = self._points(X)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ShadowBoundaryWarning)
            rows = [transverse_components(x, z, self.solution_, tol=self.tol) for x, z in P]
        return np.array(rows, dtype=complex).reshape(-1, 2)

    def far_pattern(self, thetas, r, method="leading"):
        check_is_fitted(self, "solution_")
        if method not in FAR_METHODS:
            raise ConfigError(f"unknown far-field method {method!r}")
        return np.array([far_field(r, t, self.solution_, method, warn=False) for t in np.atleast_1d(thetas)])
