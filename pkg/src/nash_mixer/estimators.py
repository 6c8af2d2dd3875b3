"""scikit-learn style wrappers around the functional API.

The generator (and optionally the reference state) are hyperparameters; the
data are stacks of observables ``(n, d, d)`` or arrays of times.  ``fit``
performs the expensive setup and stores results in trailing-underscore
attributes, so instances compose with ``get_params``/``set_params``/``clone``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .nash import (
    NashCertificate,
    fit_c,
    fit_c_on,
    mixing_time,
    nash_ratios,
)
from .semigroup import Semigroup, evolve, spectral_report
from .validation import check_observables


def _semigroup(est):
    return Semigroup(est.generator, est.rho, db_tol=est.db_tol)


class SemigroupSpectrum(BaseEstimator):
    """Spectrum of -L; ``predict(s)`` returns the counting function N(s)."""

    def __init__(self, generator=None, rho=None, db_tol=1e-9):
        self.generator = generator
        self.rho = rho
        self.db_tol = db_tol

    def fit(self, X=None, y=None):
        sg = _semigroup(self)
        self.report_ = spectral_report(sg)
        self.eigenvalues_ = self.report_.eigenvalues
        self.gap_ = self.report_.gap
        self.rho_ = sg.rho.rho
        return self

    def predict(self, s):
        check_is_fitted(self, "report_")
        return self.report_.counting(np.asarray(s, float).ravel())


class SemigroupEvolution(TransformerMixin, BaseEstimator):
    """Heisenberg evolution f -> S_t(f) as a transformer on observable stacks."""

    def __init__(self, generator=None, rho=None, t=1.0, db_tol=1e-9):
        self.generator = generator
        self.rho = rho
        self.t = t
        self.db_tol = db_tol

    def fit(self, X=None, y=None):
        self.semigroup_ = _semigroup(self)
        if X is not None:
            check_observables(X, self.semigroup_.dim)
        self.n_features_in_ = self.semigroup_.dim ** 2
        return self

    def transform(self, X):
        check_is_fitted(self, "semigroup_")
        F = check_observables(X, self.semigroup_.dim)
        return evolve(self.semigroup_, F, self.t)


class NashInequalityFit(BaseEstimator):
    """Empirical Nash constant.

    ``fit(X)`` takes the largest ratio over the observables in X (or over the
    built-in mixed sample when X is None).  ``predict(X)`` returns each
    observable's ratio at the fitted constant, so values <= 1 everywhere on
    the training set.
    """

    def __init__(self, generator=None, rho=None, kind="I", nu=1.0, t_cutoff=None,
                 n_samples=2000, seed=0, db_tol=1e-9):
        self.generator = generator
        self.rho = rho
        self.kind = kind
        self.nu = nu
        self.t_cutoff = t_cutoff
        self.n_samples = n_samples
        self.seed = seed
        self.db_tol = db_tol

    def fit(self, X=None, y=None):
        sg = _semigroup(self)
        if X is None:
            c = fit_c(sg, None, self.kind, self.nu, self.t_cutoff, self.n_samples, self.seed)
        else:
            c = fit_c_on(sg, None, X, self.kind, self.nu, self.t_cutoff)
        self.semigroup_ = sg
        self.c_ = c
        self.certificate_ = NashCertificate(self.kind, self.nu, c, self.t_cutoff if self.kind == "II" else None)
        return self

    def predict(self, X):
        check_is_fitted(self, "certificate_")
        return nash_ratios(self.semigroup_, None, X, self.certificate_)


class MixingTimeEstimator(BaseEstimator):
    """Mixing-time bounds; ``predict(t)`` returns columns (generic, nash) of xi bounds."""

    def __init__(self, generator=None, rho=None, epsilon=0.01, certificate=None, db_tol=1e-9):
        self.generator = generator
        self.rho = rho
        self.epsilon = epsilon
        self.certificate = certificate
        self.db_tol = db_tol

    def fit(self, X=None, y=None):
        self.report_ = mixing_time(_semigroup(self), None, self.epsilon, self.certificate)
        self.t_generic_ = self.report_.t_generic
        self.t_nash_ = self.report_.t_nash
        self.gap_ = self.report_.gap
        return self

    def predict(self, t):
        check_is_fitted(self, "report_")
        t = np.asarray(t, float).ravel()
        return np.column_stack([self.report_.generic_bound(t), self.report_.nash_bound(t)])
