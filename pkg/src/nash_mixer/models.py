"""Built-in generator families with analytic Nash certificates.

* depolarizing: L(f) = gamma (tr(rho f) 1 - f) toward an arbitrary full-rank rho
* qubit unital: Pauli-diagonal generators with transfer-matrix decay rates l1, l2, l3
* ring: a single particle hopping on a cycle of n sites
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidCertificate, NotCompletelyPositive
from .lindblad import LindbladGenerator, apply_heisenberg, tensor_power
from .lp_spaces import FullRankState, as_state
from .nash import NashCertificate, converse_nash
from .validation import check_hermitian

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


# --------------------------------------------------------------------------
# depolarizing
# --------------------------------------------------------------------------


@dataclass
class DepolarizingSpec:
    gamma: float
    target: FullRankState

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidCertificate(f"gamma must be positive, got {self.gamma}")
        self.target = as_state(self.target)

    @property
    def dim(self):
        return self.target.dim

    @classmethod
    def uniform(cls, gamma, dim):
        return cls(gamma, FullRankState.maximally_mixed(dim))


def build_depolarizing(spec):
    """Lindblad form sum_ij gamma p_i (J_ij^dag f J_ij - ...) with J_ij = U|i><j|U^dag.

    Summing over j turns the jump terms into gamma tr(rho f) 1 and the
    anticommutator into gamma f, so the generator is exactly the replacement
    map toward rho.
    """
    p = spec.target.eigensystem.eigenvalues
    U = spec.target.eigensystem.eigenvectors
    d = spec.dim
    ops = []
    for i in range(d):
        for j in range(d):
            ops.append(math.sqrt(spec.gamma * p[i]) * np.outer(U[:, i], U[:, j].conj()))
    return LindbladGenerator(np.zeros((d, d)), ops)


def apply_depolarizing(spec, f):
    f = np.asarray(f, dtype=complex)
    m = np.einsum("ij,...ji->...", spec.target.rho, f)
    return spec.gamma * (m[..., None, None] * np.eye(spec.dim) - f)


def depolarizing_nash_certificate(spec, nu):
    """Type I certificate at the equality constant (C gamma)^{nu/2} = ||rho^{-1}||."""
    if not nu > 0:
        raise InvalidCertificate("nu must be positive")
    return NashCertificate("I", nu, spec.target.inverse_norm ** (2 / nu) / spec.gamma)


def depolarizing_optimal_nu(spec):
    """nu minimizing the burn-in nu C / 4 of the equality certificate."""
    return 2 * math.log(spec.target.inverse_norm)


def depolarizing_mixing_estimates(spec):
    """Burn-in times from the equality certificate.

    ``optimal_burn_in`` is (e/2) log||rho^{-1}|| / gamma, reached at
    nu = 2 log||rho^{-1}||.  ``quadratic_rate_expression`` is the same
    quantity with gamma squared, kept only for side-by-side comparison.
    """
    D = spec.target.inverse_norm
    nu = depolarizing_optimal_nu(spec)
    cert = depolarizing_nash_certificate(spec, nu)
    return {
        "nu_opt": nu,
        "optimal_burn_in": cert.burn_in,
        "closed_form_burn_in": math.e / 2 * math.log(D) / spec.gamma,
        "quadratic_rate_expression": math.e / 2 * math.log(D) / spec.gamma ** 2,
    }


# --------------------------------------------------------------------------
# qubit unital
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QubitUnitalSpec:
    l1: float
    l2: float
    l3: float

    @property
    def rates(self):
        return np.array([self.l1, self.l2, self.l3], float)

    @property
    def l_min(self):
        return float(self.rates.min())

    @property
    def jump_rates(self):
        l = self.rates
        return (l.sum() - 2 * l) / 4


def build_qubit_unital(spec):
    """L(f) = sum_k gamma_k (sigma_k f sigma_k - f), gamma_k = (l_i + l_j - l_k) / 4."""
    l = spec.rates
    if np.any(l <= 0):
        raise NotCompletelyPositive(f"decay rates must be positive, got {tuple(l)}")
    g = spec.jump_rates
    if np.any(g < -1e-12):
        raise NotCompletelyPositive(f"jump rates {tuple(g)} are not all non-negative")
    g = np.maximum(g, 0.0)
    ops = [math.sqrt(gk) * s for gk, s in zip(g, PAULI) if gk > 0]
    return LindbladGenerator(np.zeros((2, 2)), ops)


def pauli_decay_rates(gen):
    """l_a = -tr(sigma_a L(sigma_a)) / 2."""
    out = apply_heisenberg(gen, PAULI)
    return -np.einsum("aij,aji->a", PAULI, out).real / 2


def qubit_nash_certificate(spec):
    """Type II certificate (nu = 1, C = 2^6 / l_min, T = 1 / (2 l_min))."""
    return converse_nash(1, 1 / spec.l_min, "II", 1 / (2 * spec.l_min))


def qubit_norm_squared(spec, t):
    """||S_t||_{1->2}^2 at the maximally mixed state."""
    return 1 + np.exp(-2 * np.asarray(t, float) * spec.l_min)


def qubit_tensor_certificates(spec, n_copies):
    """Certificates for the n-fold tensor power (nu = n, T = 1 / (2 l_min)).

    ``stated`` uses C' = 2^{2+4/n} / l_min; ``alternative`` multiplies in the
    extra factor 2 / l_min.  For n > 2 both violate T >= nu / (4 lambda)
    because the gap stays l_min while nu grows.
    """
    n, l = n_copies, spec.l_min
    T = 1 / (2 * l)
    stated = NashCertificate("II", n, 2 ** (2 + 4 / n) / l, T)
    alternative = NashCertificate("II", n, 2 ** (2 + 4 / n) / l * (2 / l), T)
    return {"stated": stated, "alternative": alternative, "gap_condition_ok": n / (4 * l) <= T}


def build_qubit_tensor(spec, n_copies):
    return tensor_power(build_qubit_unital(spec), n_copies)


# --------------------------------------------------------------------------
# ring
# --------------------------------------------------------------------------


@dataclass
class RingSpec:
    n_sites: int
    hamiltonian: np.ndarray | None = None
    coherent: bool = True

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise ValueError(f"a ring needs at least 2 sites, got {self.n_sites}")
        self.n_sites = int(self.n_sites)
        if self.hamiltonian is not None:
            self.hamiltonian = check_hermitian(self.hamiltonian, name="hamiltonian")
            if self.hamiltonian.shape != (self.n_sites, self.n_sites):
                raise ValueError("hamiltonian shape does not match the number of sites")

    @property
    def cutoff(self):
        return self.n_sites ** 2 / 16


def ring_hopping_ops(n):
    """L_m = |m><m+1 mod n|."""
    ops = []
    for m in range(n):
        J = np.zeros((n, n), complex)
        J[m, (m + 1) % n] = 1
        ops.append(J)
    return ops


def default_ring_hamiltonian(n):
    return sum(J + J.conj().T for J in ring_hopping_ops(n))


def build_ring(spec):
    """Hopping in both directions at unit rate plus an optional coherent part.

    The jump set is {L_m, L_m^dag}.  The Hamiltonian is ``spec.hamiltonian``
    when given, else the hopping sum if ``coherent`` is set, else zero.
    """
    n = spec.n_sites
    ops = ring_hopping_ops(n)
    ops = ops + [J.conj().T for J in ops]
    if spec.hamiltonian is not None:
        H = spec.hamiltonian
    elif spec.coherent:
        H = default_ring_hamiltonian(n)
    else:
        H = np.zeros((n, n))
    return LindbladGenerator(H, ops)


def ring_diagonal_spectrum(n):
    """Eigenvalues of -L on diagonal observables, m = 0..n-1."""
    m = np.arange(n)
    return 2 * (1 - np.cos(2 * np.pi * m / n))


def ring_spectrum(n):
    """Full spectrum of -L (dissipative part), ascending."""
    return np.sort(np.concatenate([ring_diagonal_spectrum(n), np.full(n * (n - 1), 2.0)]))


def ring_gap(n):
    return float(min(2 * (1 - math.cos(2 * math.pi / n)), 2.0))


def ring_norm_bound(spec, t):
    """``(exact, simplified)`` upper bounds on ||S_t||_{1->2}^2.

    exact      = 1 + sum_{m=1}^{n-1} exp(-2t(1 - cos 2 pi m / n)) + n^2 exp(-4t)
    simplified = sqrt(8 n^2 / t), meant for t <= n^2 / 16
    """
    n = spec.n_sites
    t = np.asarray(t, float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    lam = ring_diagonal_spectrum(n)[1:]
    exact = 1 + np.exp(-2 * np.multiply.outer(t, lam)).sum(axis=-1) + n ** 2 * np.exp(-4 * t)
    simplified = np.sqrt(8 * n ** 2 / t)
    if t.ndim == 0:
        return float(exact), float(simplified)
    return exact, simplified


def ring_ultracontractive_constant(spec):
    """C in ||S_t||_{1->2} <= (C / t)^{1/4} for t <= n^2 / 16."""
    return 8 * spec.n_sites ** 2


def ring_nash_certificate(spec, variant="derived"):
    """Type II ring certificate with nu = 1, T = n^2 / 16.

    ``derived`` applies the converse to C = 8 n^2, giving 2^9 n^2;
    ``printed`` is the twice larger 2^10 n^2.
    """
    derived = converse_nash(1, ring_ultracontractive_constant(spec), "II", spec.cutoff)
    if variant == "derived":
        return derived
    if variant == "printed":
        return derived.scaled(2)
    raise ValueError(f"unknown ring certificate variant {variant!r}")


def ring_nash_certificates(spec):
    return {v: ring_nash_certificate(spec, v) for v in ("derived", "printed")}
