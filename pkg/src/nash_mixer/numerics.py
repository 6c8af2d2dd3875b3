"""Dense complex linear algebra kernel.

Vectorization convention
------------------------
A d x d matrix X is identified with the vector ``(X (x) 1)|Omega>`` where
``|Omega> = sum_j |j, j>``.  Componentwise this is ``vec(X)[i*d + j] = X[i, j]``,
i.e. the row-major flattening ``X.reshape(-1)``.  With it

    vec(A X B) = (A (x) B^T) vec(X),

so the channel ``f -> sum_k E_k f E_k^dag`` has matrix ``sum_k E_k (x) conj(E_k)``.
All superoperators in the package use this convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatch, NonFiniteInput, NotPositiveDefinite
from .validation import HERMITIAN_TOL, RANK_EPS, check_hermitian, check_matrix


@dataclass(frozen=True)
class HermitianEigensystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def apply(self, fn):
        """Return ``V fn(Lambda) V^dag``."""
        V = self.eigenvectors
        return (V * fn(self.eigenvalues)) @ V.conj().T


def eig_hermitian(A, tol=HERMITIAN_TOL):
    A = check_hermitian(A, tol)
    w, V = np.linalg.eigh(A)
    return HermitianEigensystem(w, V)


def psd_power(A, s, eps_rank=RANK_EPS):
    """Fractional power ``A**s`` of a positive-definite matrix."""
    es = A if isinstance(A, HermitianEigensystem) else eig_hermitian(A)
    if es.eigenvalues[0] <= eps_rank:
        raise NotPositiveDefinite(
            f"smallest eigenvalue {es.eigenvalues[0]:.3e} is not above {eps_rank:.1e}"
        )
    return es.apply(lambda w: w ** s)


def matrix_exp(A, hermitian=None):
    """Matrix exponential.

    Hermitian input goes through the eigendecomposition; everything else uses
    scaling-and-squaring with a Pade approximant.  ``hermitian=None`` detects.
    """
    A = check_matrix(A)
    if hermitian is None:
        hermitian = np.allclose(A, A.conj().T, rtol=0, atol=1e-13 * max(1.0, np.abs(A).max()))
    if hermitian:
        w, V = np.linalg.eigh((A + A.conj().T) / 2)
        return (V * np.exp(w)) @ V.conj().T
    return scipy.linalg.expm(A)


def vec(X):
    return np.asarray(X).reshape(-1)


def unvec(v, dim=None):
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.shape[-1])))
    if dim * dim != v.shape[-1]:
        raise DimensionMismatch(f"vector of length {v.shape[-1]} is not a vectorized square matrix")
    return v.reshape(v.shape[:-1] + (dim, dim))


def vectorize_channel(kraus):
    """Superoperator matrix ``sum_k E_k (x) conj(E_k)`` of a Kraus map."""
    kraus = [check_matrix(E, "Kraus operator") for E in kraus]
    if not kraus:
        raise DimensionMismatch("at least one Kraus operator is required")
    d = kraus[0].shape[0]
    for E in kraus:
        if E.shape != (d, d):
            raise DimensionMismatch("Kraus operators must share a dimension")
    return sum(np.kron(E, E.conj()) for E in kraus)


def left_right(A, B):
    """Superoperator of ``X -> A X B``."""
    return np.kron(A, np.asarray(B).T)


def trace_norm(A):
    A = np.asarray(A, dtype=complex)
    if not np.all(np.isfinite(A)):
        raise NonFiniteInput("trace_norm of non-finite matrix")
    if np.allclose(A, A.conj().T, rtol=0, atol=1e-14 * max(1.0, np.abs(A).max())):
        return float(np.abs(np.linalg.eigvalsh((A + A.conj().T) / 2)).sum())
    return float(np.linalg.svd(A, compute_uv=False).sum())


def hermitian_part(A):
    return (A + np.conj(np.swapaxes(A, -1, -2))) / 2


def hermitian_basis(d):
    """Orthonormal (Hilbert-Schmidt) basis of d x d Hermitian matrices.

    Diagonal matrix units, then symmetric and antisymmetric off-diagonal pairs
    scaled by 1/sqrt(2).  Returned as an array of shape (d*d, d, d).
    """
    out = []
    for i in range(d):
        E = np.zeros((d, d), complex)
        E[i, i] = 1
        out.append(E)
    r = 1 / np.sqrt(2)
    for i in range(d):
        for j in range(i + 1, d):
            S = np.zeros((d, d), complex)
            S[i, j] = S[j, i] = r
            A = np.zeros((d, d), complex)
            A[i, j] = -1j * r
            A[j, i] = 1j * r
            out.extend([S, A])
    return np.array(out)
