"""Time evolution S_t = exp(tL) and the operator norms that control mixing.

All norm computations work on d^2 x d^2 superoperator matrices.  With
W = Gamma^{1/2} (f -> rho^{1/4} f rho^{1/4}) one has ||f||_{2,rho} = ||W f||_HS,
and the extreme points of the ||.||_{1,rho} unit ball among Hermitian
observables are +-Gamma^{-1}(|psi><psi|).  Every supremum over observables
therefore reduces to a maximization over unit vectors psi, handled by
:func:`nash_mixer.sphere.maximize_on_sphere`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import minimize

from .exceptions import NotReversible
from .lindblad import (
    apply_heisenberg,
    check_detailed_balance,
    gamma_superoperator,
    stationary_state,
    symmetrize,
    to_superoperator,
)
from .lp_spaces import as_state, variance, weighted_inner
from .numerics import hermitian_basis, matrix_exp, unvec, vec
from .sphere import maximize_on_sphere, quartic_form
from .validation import check_time

DEFAULT_RESTARTS = 64


class Semigroup:
    """A Lindblad generator together with its reference state.

    When ``rho`` is omitted the unique stationary state is computed (raising
    ``NotPrimitive``/``NotFullRank`` when it does not exist).  Superoperator
    data are computed lazily and cached.
    """

    def __init__(self, generator, rho=None, db_tol=1e-9):
        self.generator = generator
        self.db_tol = db_tol
        if rho is None:
            rho = stationary_state(generator, superop=self.superop_obj)
        self.rho = as_state(rho)

    @property
    def dim(self):
        return self.generator.dim

    @cached_property
    def superop_obj(self):
        return to_superoperator(self.generator)

    @property
    def superop(self):
        return self.superop_obj.matrix

    @cached_property
    def detailed_balance(self):
        return check_detailed_balance(self.generator, self.rho, tol=self.db_tol, superop=self.superop)

    @property
    def reversible(self):
        return self.detailed_balance[0]

    def require_reversible(self):
        if not self.reversible:
            raise NotReversible(
                f"generator is not reversible w.r.t. rho (residual {self.detailed_balance[1]:.3e})"
            )

    @cached_property
    def symmetrized(self):
        return symmetrize(self.generator, self.rho, superop=self.superop).matrix

    @cached_property
    def W(self):
        return gamma_superoperator(self.rho, 0.5)

    @cached_property
    def W_inv(self):
        return gamma_superoperator(self.rho, -0.5)

    @cached_property
    def gamma_inv(self):
        return gamma_superoperator(self.rho, -1.0)

    @cached_property
    def mean_projector(self):
        """Matrix of f -> tr(rho f) 1."""
        return np.outer(vec(np.eye(self.dim)), vec(self.rho.rho.T)).astype(complex)

    @cached_property
    def spectrum(self):
        """``(lambdas, V)``: ascending eigenvalues of -L~ and orthonormal eigenvectors."""
        self.require_reversible()
        K = -(self.symmetrized + self.symmetrized.conj().T) / 2
        lam, V = np.linalg.eigh(K)
        return lam, V

    def propagator(self, t, deviation=False, method="auto"):
        """Heisenberg matrix of S_t (minus the mean projection if ``deviation``)."""
        t = check_time(t)
        if method == "auto":
            method = "spectral" if self.reversible else "expm"
        if method == "spectral":
            lam, V = self.spectrum
            S = self.W_inv @ ((V * np.exp(-t * lam)) @ V.conj().T) @ self.W
        else:
            S = matrix_exp(t * self.superop, hermitian=False)
        if deviation:
            S = S - self.mean_projector
        return S

    def __repr__(self):
        return f"Semigroup(dim={self.dim}, reversible={self.reversible})"


def _as_semigroup(sg, rho=None):
    return sg if isinstance(sg, Semigroup) else Semigroup(sg, rho)


def evolve(sg, f, t, method="auto"):
    """S_t(f) for an observable or a stack of observables."""
    S = sg.propagator(t, method=method)
    f = np.asarray(f, dtype=complex)
    out = unvec(f.reshape(f.shape[:-2] + (-1,)) @ S.T, sg.dim)
    return (out + np.conj(np.swapaxes(out, -1, -2))) / 2


def evolve_state(sg, sigma, t):
    """Schrodinger-picture evolution S_t^*(sigma)."""
    S = sg.propagator(t, method="expm").conj().T
    sigma = np.asarray(sigma, dtype=complex)
    return unvec(sigma.reshape(sigma.shape[:-2] + (-1,)) @ S.T, sg.dim)


def spectral_gap(sg):
    lam, _ = sg.spectrum
    return float(lam[1])


def variational_gap(sg, n_starts=8, seed=0):
    """min_g E(g)/Var(g) by Rayleigh-quotient descent from random starts.

    Built from the Dirichlet form and the weighted variance on a Hermitian
    basis, independently of the symmetrized spectrum.
    """
    d = sg.dim
    B = hermitian_basis(d)
    LB = apply_heisenberg(sg.generator, B)
    n = len(B)
    A = np.empty((n, n))
    for a in range(n):
        A[a] = -weighted_inner(B[a], LB, sg.rho)
    A = (A + A.T) / 2
    Bc = B - np.einsum("ij,nji->n", sg.rho.rho, B).real[:, None, None] * np.eye(d)
    Vm = np.empty((n, n))
    for a in range(n):
        Vm[a] = weighted_inner(Bc[a], Bc, sg.rho)
    Vm = (Vm + Vm.T) / 2

    def fun(c):
        ac, vc = A @ c, Vm @ c
        num, den = c @ ac, c @ vc
        r = num / den
        return r, 2 * (ac - r * vc) / den

    best = np.inf
    for k in range(n_starts):
        rng = np.random.default_rng([seed, k])
        res = minimize(fun, rng.standard_normal(n), jac=True, method="L-BFGS-B",
                       options={"maxiter": 2000, "ftol": 1e-15, "gtol": 1e-12})
        best = min(best, float(res.fun))
    return best


def norm_2to2_deviation(sg, t):
    """Largest singular value of the symmetrized S_t - rho."""
    sg.require_reversible()
    A = sg.W @ sg.propagator(t, deviation=True) @ sg.W_inv
    return float(np.linalg.svd(A, compute_uv=False)[0])


def _starts(sg):
    # eigenvectors of rho and uniform superpositions are natural extremizers
    V = sg.rho.eigensystem.eigenvectors
    return [V[:, k] for k in range(sg.dim)] + [np.ones(sg.dim) / np.sqrt(sg.dim)]


def norm_1to2(sg, t, deviation=False, n_restarts=DEFAULT_RESTARTS, seed=0, threads=1,
              full_output=False):
    """sup over Hermitian f with ||f||_{1,rho} = 1 of ||(S_t - [deviation] rho)(f)||_{2,rho}."""
    sg.require_reversible()
    A = sg.W @ sg.propagator(t, deviation=deviation) @ sg.gamma_inv
    M = A.conj().T @ A
    res = maximize_on_sphere(quartic_form(M, sg.dim), sg.dim, n_restarts, seed, threads,
                             extra_starts=_starts(sg))
    value = float(np.sqrt(max(res.value, 0.0)))
    return (value, res) if full_output else value


def norm_1to2_uniform(sg, t, n_restarts=DEFAULT_RESTARTS, seed=0):
    """||S_t||_{1->2} at rho = 1/d via d <psi| S_{2t}(|psi><psi|) |psi>."""
    sg.require_reversible()
    if not sg.rho.is_maximally_mixed():
        raise ValueError("closed form requires the maximally mixed reference state")
    d = sg.dim
    S2 = sg.propagator(2 * t)
    # <psi|S(psi psi^dag)|psi> = x^dag S x with x = vec(psi psi^dag)
    M = d * (S2 + S2.conj().T) / 2
    res = maximize_on_sphere(quartic_form(M, d), d, n_restarts, seed, extra_starts=_starts(sg))
    return float(np.sqrt(res.value))


def norm_2toinf_deviation(sg, t, n_restarts=DEFAULT_RESTARTS, seed=0, threads=1):
    """||S_t - rho||_{2->inf,rho}; equals the 1->2 deviation norm by duality."""
    return norm_1to2(sg, t, deviation=True, n_restarts=n_restarts, seed=seed, threads=threads)


def norm_2toinf_direct(sg, t, deviation=True, n_restarts=DEFAULT_RESTARTS, seed=0):
    """Same quantity from the dual side: max over unit phi of
    ||Gamma^{-1}((S_t - rho)^*(|phi><phi|))||_{2,rho}."""
    A = sg.W_inv @ sg.propagator(t, deviation=deviation).conj().T
    M = A.conj().T @ A
    res = maximize_on_sphere(quartic_form(M, sg.dim), sg.dim, n_restarts, seed,
                             extra_starts=_starts(sg))
    return float(np.sqrt(max(res.value, 0.0)))


def norm_1toinf(sg, t, deviation=True, n_restarts=DEFAULT_RESTARTS, seed=0):
    """sup ||(S_t - rho)(f)||_inf over ||f||_{1,rho} = 1."""
    d = sg.dim
    B = sg.propagator(t, deviation=deviation) @ sg.gamma_inv
    BH = B.conj().T

    def fun(u):
        Z = unvec(B @ np.outer(u, u.conj()).reshape(-1), d)
        w, V = np.linalg.eigh((Z + Z.conj().T) / 2)
        k = int(np.argmax(np.abs(w)))
        phi = V[:, k]
        G = unvec(BH @ np.outer(phi, phi.conj()).reshape(-1), d)
        return float(abs(w[k])), np.sign(w[k]) * (G @ u)

    return maximize_on_sphere(fun, d, n_restarts, seed, extra_starts=_starts(sg)).value


def xi_exact(sg, t, n_restarts=DEFAULT_RESTARTS, seed=0, threads=1, full_output=False):
    """xi(t) = max over pure states of ||S_t^*(|psi><psi|) - rho||_1."""
    t = check_time(t)
    d = sg.dim
    S = sg.propagator(t, method="expm" if not sg.reversible else "auto")
    SH = S.conj().T
    rho = sg.rho.rho

    def fun(u):
        X = unvec(SH @ np.outer(u, u.conj()).reshape(-1), d) - rho
        w, V = np.linalg.eigh((X + X.conj().T) / 2)
        Z = (V * np.sign(w)) @ V.conj().T
        G = unvec(S @ Z.reshape(-1), d)
        return float(np.abs(w).sum()), G @ u

    res = maximize_on_sphere(fun, d, n_restarts, seed, threads, extra_starts=_starts(sg))
    return (res.value, res) if full_output else res.value


def generic_xi_bound(sg, t):
    """sqrt(||rho^{-1}||) exp(-t lambda)."""
    return float(np.sqrt(sg.rho.inverse_norm) * np.exp(-t * spectral_gap(sg)))


def time_grid(gap, n=25, lo=1e-3, hi=20.0):
    """Geometric grid spanning [lo/gap, hi/gap]."""
    return np.geomspace(lo / gap, hi / gap, n)


@dataclass
class SpectralReport:
    """Spectrum of -L for a reversible primitive generator."""

    eigenvalues: np.ndarray
    tol: float = 1e-9

    @property
    def gap(self):
        return float(self.eigenvalues[1])

    def counting(self, s):
        """N(s) = #{i : lambda_i <= s}; vectorized over ``s``."""
        s = np.asarray(s, float)
        lam = self.eigenvalues
        out = (lam[None, :] <= s.reshape(-1, 1) + self.tol * np.maximum(1.0, np.abs(s.reshape(-1, 1)))).sum(axis=1)
        return int(out[0]) if s.ndim == 0 else out

    def zeta(self, t):
        t = np.asarray(t, float)
        out = np.exp(-np.multiply.outer(t, self.eigenvalues)).sum(axis=-1)
        return float(out) if t.ndim == 0 else out

    def breakpoints(self):
        """Distinct eigenvalues (clustered at ``tol``) with their multiplicities."""
        lam = self.eigenvalues
        values, counts = [], []
        for x in lam:
            if values and abs(x - values[-1]) <= self.tol * max(1.0, abs(x)):
                counts[-1] += 1
            else:
                values.append(float(x))
                counts.append(1)
        return np.array(values), np.array(counts)


def spectral_report(sg):
    lam, _ = sg.spectrum
    lam = lam.copy()
    lam[0] = max(lam[0], 0.0) if abs(lam[0]) < 1e-9 else lam[0]
    return SpectralReport(lam)


def zeta_trace(sg, t):
    """tr exp(t L~), the superoperator-trace form of zeta(t)."""
    return float(np.trace(matrix_exp(t * sg.symmetrized, hermitian=False)).real)
