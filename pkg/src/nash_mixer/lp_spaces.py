"""Weighted non-commutative L_p(rho) spaces.

Norms use the symmetric embedding

    ||f||_{p,rho} = ( tr |rho^{1/2p} f rho^{1/2p}|^p )^{1/p},

with ||f||_{inf,rho} the operator norm.  At p = 2 this is the norm of the
inner product <f, g>_rho = tr(rho^{1/2} f rho^{1/2} g).

All functions accept either a single (d, d) observable or a stack (n, d, d);
stacked input returns an array of values.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionMismatch, InvalidState
from .numerics import HermitianEigensystem, hermitian_part
from .validation import RANK_EPS, check_exponent, check_hermitian, check_random_state


class FullRankState:
    """Positive-definite density matrix with cached spectral data."""

    def __init__(self, rho, eps_rank=RANK_EPS, trace_tol=1e-10):
        try:
            rho = check_hermitian(rho, name="rho")
        except ValueError as exc:
            raise InvalidState(str(exc)) from exc
        tr = np.trace(rho).real
        if abs(tr - 1) > trace_tol:
            raise InvalidState(f"state must have unit trace, got {tr!r}")
        w, V = np.linalg.eigh(rho)
        if w[0] <= eps_rank:
            raise InvalidState(f"state is not full rank (smallest eigenvalue {w[0]:.3e})")
        self.rho = rho
        self.dim = rho.shape[0]
        self.eigensystem = HermitianEigensystem(w, V)
        self._powers = {}
        for s in (0.5, -0.5, 0.25, -0.25, -1.0):
            self.power(s)

    @classmethod
    def maximally_mixed(cls, d):
        return cls(np.eye(d) / d)

    @classmethod
    def from_probabilities(cls, probs, basis=None):
        p = np.asarray(probs, float)
        rho = np.diag(p).astype(complex)
        if basis is not None:
            rho = basis @ rho @ basis.conj().T
        return cls(rho)

    def power(self, s):
        s = float(s)
        if s not in self._powers:
            if s == 0.0:
                self._powers[s] = np.eye(self.dim, dtype=complex)
            elif s == 1.0:
                self._powers[s] = self.rho
            else:
                self._powers[s] = self.eigensystem.apply(lambda w: w ** s)
        return self._powers[s]

    @property
    def min_eigenvalue(self):
        return float(self.eigensystem.eigenvalues[0])

    @property
    def inverse_norm(self):
        """Operator norm of rho^{-1}."""
        return 1.0 / self.min_eigenvalue

    def is_maximally_mixed(self, tol=1e-12):
        w = self.eigensystem.eigenvalues
        return bool(w[-1] - w[0] <= tol)

    def __repr__(self):
        return f"FullRankState(dim={self.dim}, min_eig={self.min_eigenvalue:.4g})"


def as_state(rho):
    return rho if isinstance(rho, FullRankState) else FullRankState(rho)


def _stack(f, dim):
    f = np.asarray(f, dtype=complex)
    single = f.ndim == 2
    if single:
        f = f[None]
    if f.shape[-2:] != (dim, dim):
        raise DimensionMismatch(f"observable shape {f.shape[-2:]} does not match state dimension {dim}")
    return f, single


def _out(values, single):
    return float(values[0]) if single else values


def gamma_map(f, rho, s=1.0):
    """Weighting map f -> rho^{s/2} f rho^{s/2}."""
    rho = as_state(rho)
    f, single = _stack(f, rho.dim)
    P = rho.power(s / 2)
    g = P @ f @ P
    return g[0] if single else g


def weighted_norm(f, rho, p=2.0):
    rho = as_state(rho)
    p = check_exponent(p)
    f, single = _stack(f, rho.dim)
    if np.isinf(p):
        vals = np.abs(np.linalg.eigvalsh(hermitian_part(f))).max(axis=-1)
        return _out(vals, single)
    if p == 2.0:
        g = gamma_map(f, rho, 0.5)
        vals = np.sqrt(np.einsum("nij,nij->n", g, g.conj()).real)
        return _out(vals, single)
    P = rho.power(1 / (2 * p))
    w = np.abs(np.linalg.eigvalsh(hermitian_part(P @ f @ P)))
    # rescale so that large p cannot overflow
    top = w.max(axis=-1, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    vals = top[..., 0] * ((w / safe) ** p).sum(axis=-1) ** (1 / p)
    return _out(vals, single)


def weighted_inner(f, g, rho):
    """<f, g>_rho = tr(rho^{1/2} f rho^{1/2} g), real for Hermitian arguments."""
    rho = as_state(rho)
    f, sf = _stack(f, rho.dim)
    g, sg = _stack(g, rho.dim)
    if f.shape[0] != g.shape[0] and 1 not in (f.shape[0], g.shape[0]):
        raise DimensionMismatch("observable stacks must have matching lengths")
    R = rho.power(0.5)
    A, g = np.broadcast_arrays(R @ f @ R, g)
    vals = np.einsum("nij,nji->n", A, g).real
    return _out(vals, sf and sg)


def expectation(f, rho):
    rho = as_state(rho)
    f, single = _stack(f, rho.dim)
    vals = np.einsum("ij,nji->n", rho.rho, f).real
    return _out(vals, single)


def mean_projection(f, rho):
    """f -> tr(rho f) 1."""
    rho = as_state(rho)
    f, single = _stack(f, rho.dim)
    m = np.einsum("ij,nji->n", rho.rho, f).real
    out = m[:, None, None] * np.eye(rho.dim)
    return out[0] if single else out


def variance(f, rho):
    rho = as_state(rho)
    f, single = _stack(f, rho.dim)
    g = f - mean_projection(f, rho)
    vals = weighted_norm(g, rho, 2) ** 2
    return _out(np.atleast_1d(vals), single)


def random_observables(dim, n, seed=None):
    """Gaussian Hermitian matrices (n, dim, dim), independent Re/Im parts."""
    rng = check_random_state(seed)
    G = rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))
    return hermitian_part(G)


def random_state(dim, seed=None, min_eig=0.05):
    """Random full-rank state with spectrum floor ``min_eig`` in a random basis."""
    rng = check_random_state(seed)
    p = rng.dirichlet(np.ones(dim)) * (1 - dim * min_eig) + min_eig
    Z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    Q, R = np.linalg.qr(Z)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    return FullRankState.from_probabilities(p, Q)
