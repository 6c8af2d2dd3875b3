"""Lindblad generators and their structural analysis.

The Heisenberg-picture generator is

    L(f) = i[H, f] + sum_k  J_k^dag f J_k - 1/2 {J_k^dag J_k, f}

and L* (Schrodinger picture) is its Hilbert-Schmidt adjoint.  Superoperator
matrices follow the row-major vectorization documented in
:mod:`nash_mixer.numerics`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, NotFullRank, NotPrimitive
from .lp_spaces import FullRankState, as_state, weighted_inner
from .numerics import hermitian_basis, left_right, unvec
from .validation import RANK_EPS, check_hermitian, check_matrix, check_random_state

HEISENBERG = "heisenberg"
SCHRODINGER = "schrodinger"


@dataclass
class LindbladGenerator:
    hamiltonian: np.ndarray
    lindblad_ops: list = field(default_factory=list)

    def __post_init__(self):
        self.hamiltonian = check_hermitian(self.hamiltonian, name="hamiltonian")
        d = self.hamiltonian.shape[0]
        ops = [check_matrix(J, "Lindblad operator") for J in self.lindblad_ops]
        for J in ops:
            if J.shape != (d, d):
                raise DimensionMismatch(f"Lindblad operator of shape {J.shape} in dimension {d}")
        self.lindblad_ops = ops

    @property
    def dim(self):
        return self.hamiltonian.shape[0]

    @classmethod
    def zero(cls, d):
        return cls(np.zeros((d, d)), [])

    def dissipative_part(self):
        return LindbladGenerator(np.zeros_like(self.hamiltonian), list(self.lindblad_ops))

    def __call__(self, f):
        return apply_heisenberg(self, f)


@dataclass
class Superoperator:
    matrix: np.ndarray
    picture: str = HEISENBERG

    @property
    def dim(self):
        return int(round(np.sqrt(self.matrix.shape[0])))

    def apply(self, f):
        f = np.asarray(f, dtype=complex)
        flat = f.reshape(f.shape[:-2] + (-1,))
        return unvec(flat @ self.matrix.T, self.dim)

    def adjoint(self):
        other = {HEISENBERG: SCHRODINGER, SCHRODINGER: HEISENBERG}.get(self.picture, self.picture)
        return Superoperator(self.matrix.conj().T, other)

    def __matmul__(self, other):
        return Superoperator(self.matrix @ other.matrix, self.picture)


def _check_operand(gen, f):
    f = np.asarray(f, dtype=complex)
    if f.shape[-2:] != (gen.dim, gen.dim):
        raise DimensionMismatch(f"operand shape {f.shape[-2:]} does not match generator dimension {gen.dim}")
    return f


def apply_heisenberg(gen, f):
    f = _check_operand(gen, f)
    H = gen.hamiltonian
    out = 1j * (H @ f - f @ H)
    for J in gen.lindblad_ops:
        Jd = J.conj().T
        K = Jd @ J
        out = out + Jd @ f @ J - 0.5 * (K @ f + f @ K)
    return out


def apply_schrodinger(gen, sigma):
    sigma = _check_operand(gen, sigma)
    H = gen.hamiltonian
    out = -1j * (H @ sigma - sigma @ H)
    for J in gen.lindblad_ops:
        Jd = J.conj().T
        K = Jd @ J
        out = out + J @ sigma @ Jd - 0.5 * (K @ sigma + sigma @ K)
    return out


def to_superoperator(gen, picture=HEISENBERG):
    d = gen.dim
    I = np.eye(d)
    H = gen.hamiltonian
    M = 1j * (left_right(H, I) - left_right(I, H))
    for J in gen.lindblad_ops:
        Jd = J.conj().T
        K = Jd @ J
        M += left_right(Jd, J) - 0.5 * (left_right(K, I) + left_right(I, K))
    if picture == HEISENBERG:
        return Superoperator(M, HEISENBERG)
    if picture == SCHRODINGER:
        return Superoperator(M.conj().T, SCHRODINGER)
    raise ValueError(f"unknown picture {picture!r}")


def gamma_superoperator(rho, s):
    """Matrix of f -> rho^{s/2} f rho^{s/2}."""
    P = as_state(rho).power(s / 2)
    return left_right(P, P)


def stationary_state(gen, null_tol=1e-9, eps_rank=RANK_EPS, superop=None):
    """Unique full-rank stationary state of a primitive generator."""
    Ls = (superop if superop is not None else to_superoperator(gen)).matrix.conj().T
    _, s, Vh = np.linalg.svd(Ls)
    thresh = null_tol * max(1.0, s[0])
    null_dim = int(np.sum(s <= thresh))
    if null_dim != 1:
        raise NotPrimitive(f"stationary subspace has dimension {null_dim}, expected 1")
    X = unvec(Vh[-1].conj(), gen.dim)
    X = X / np.trace(X)
    X = (X + X.conj().T) / 2
    w = np.linalg.eigvalsh(X)
    if w[0] <= eps_rank:
        raise NotFullRank(f"stationary state has eigenvalue {w[0]:.3e} <= {eps_rank:.1e}")
    return FullRankState(X / np.trace(X).real)


def weighted_gram(superop_matrix, rho, basis):
    """Matrix G[a, b] = <B_a, L(B_b)>_rho for a stack of Hermitian matrices B."""
    W = gamma_superoperator(rho, 0.5)
    Bv = basis.reshape(len(basis), -1).T
    left = W @ Bv
    right = W @ (superop_matrix @ Bv)
    return (left.conj().T @ right).real


def check_detailed_balance(gen, rho, tol=1e-9, seed=0, n_random_pairs=1000, superop=None):
    """Return ``(reversible, residual)``.

    The residual is max |<f, L g>_rho - <L f, g>_rho| over pairs from the
    Hermitian matrix-unit basis; exhaustive for d <= 8, otherwise over
    ``n_random_pairs`` randomly drawn pairs.  ``tol`` is relative to the
    largest Gram entry (floored at 1).
    """
    rho = as_state(rho)
    L = superop if superop is not None else to_superoperator(gen).matrix
    d = gen.dim
    basis = hermitian_basis(d)
    if d <= 8:
        G = weighted_gram(L, rho, basis)
        residual = float(np.abs(G - G.T).max())
        scale = max(1.0, float(np.abs(G).max()))
    else:
        rng = check_random_state(seed)
        a = rng.integers(0, d * d, n_random_pairs)
        b = rng.integers(0, d * d, n_random_pairs)
        W = gamma_superoperator(rho, 0.5)
        Bv = basis.reshape(d * d, -1)
        WB = Bv @ W.T
        WLB = Bv @ (W @ L).T
        fg = np.einsum("ni,ni->n", WB[a].conj(), WLB[b]).real
        gf = np.einsum("ni,ni->n", WB[b].conj(), WLB[a]).real
        residual = float(np.abs(fg - gf).max())
        scale = max(1.0, float(np.abs(fg).max()), float(np.abs(gf).max()))
    return residual <= tol * scale, residual


def symmetrize(gen, rho, superop=None):
    """Similarity transform Gamma^{1/2} o L o Gamma^{-1/2}.

    Hermitian exactly when the generator is reversible with respect to rho,
    and always isospectral with L.
    """
    L = superop if superop is not None else to_superoperator(gen).matrix
    W = gamma_superoperator(rho, 0.5)
    Winv = gamma_superoperator(rho, -0.5)
    return Superoperator(W @ L @ Winv, "symmetrized")


def dirichlet_form(gen, f, rho):
    """E(f) = -<f, L(f)>_rho (stack-aware)."""
    rho = as_state(rho)
    return -weighted_inner(f, apply_heisenberg(gen, f), rho)


def _embed(A, site, n_sites, local_dim):
    out = np.eye(1)
    for k in range(n_sites):
        out = np.kron(out, A if k == site else np.eye(local_dim))
    return out


def tensor_power(gen, n_copies):
    """Generator of S_t^{(x) n}: sum of copies of ``gen`` acting on each factor."""
    d = gen.dim
    H = sum(_embed(gen.hamiltonian, k, n_copies, d) for k in range(n_copies))
    ops = [_embed(J, k, n_copies, d) for k in range(n_copies) for J in gen.lindblad_ops]
    return LindbladGenerator(H, ops)
