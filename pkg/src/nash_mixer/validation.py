"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import numbers

import numpy as np

from .exceptions import (
    DimensionMismatch,
    InvalidExponent,
    NegativeTime,
    NonFiniteInput,
    NotHermitian,
)

HERMITIAN_TOL = 1e-10
RANK_EPS = 1e-12


def check_matrix(A, name="matrix"):
    """Return ``A`` as a finite square complex ndarray."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    A = A.astype(complex, copy=False)
    if not np.all(np.isfinite(A)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return A


def hermiticity_residual(A):
    """Relative residual ||A - A^dag||_op / ||A||_op (0 for the zero matrix)."""
    scale = np.linalg.norm(A, 2)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(A - A.conj().T, 2) / scale)


def check_hermitian(A, tol=HERMITIAN_TOL, name="matrix"):
    """Validate Hermiticity to relative tolerance and return the Hermitian part."""
    A = check_matrix(A, name)
    res = hermiticity_residual(A)
    if res > tol:
        raise NotHermitian(f"{name} is not Hermitian (relative residual {res:.3e} > {tol:.1e})")
    return (A + A.conj().T) / 2


def check_same_dim(dim, *mats, name="operand"):
    for M in mats:
        if np.shape(M)[-2:] != (dim, dim):
            raise DimensionMismatch(f"{name} has shape {np.shape(M)}, expected ({dim}, {dim})")


def check_observables(F, dim=None, tol=HERMITIAN_TOL):
    """Validate a stack of Hermitian observables with shape (n, d, d).

    A single (d, d) matrix is promoted to a stack of one.
    """
    F = np.asarray(F, dtype=complex)
    if F.ndim == 2:
        F = F[None]
    if F.ndim != 3 or F.shape[1] != F.shape[2]:
        raise DimensionMismatch(f"expected observables of shape (n, d, d), got {F.shape}")
    if dim is not None and F.shape[1] != dim:
        raise DimensionMismatch(f"observables have dimension {F.shape[1]}, expected {dim}")
    if not np.all(np.isfinite(F)):
        raise NonFiniteInput("observables have non-finite entries")
    dev = np.abs(F - F.conj().transpose(0, 2, 1)).max(initial=0.0)
    scale = np.abs(F).max(initial=0.0)
    if scale > 0 and dev > tol * scale * F.shape[1]:
        raise NotHermitian("observables must be Hermitian")
    return (F + F.conj().transpose(0, 2, 1)) / 2


def check_time(t, name="t"):
    if not isinstance(t, numbers.Real) and np.ndim(t) != 0:
        raise TypeError(f"{name} must be a real scalar")
    t = float(t)
    if not np.isfinite(t):
        raise NonFiniteInput(f"{name} must be finite")
    if t < 0:
        raise NegativeTime(f"{name} must be non-negative, got {t}")
    return t


def check_exponent(p):
    p = float(p)
    if np.isnan(p) or p < 1:
        raise InvalidExponent(f"L_p exponent must satisfy p >= 1, got {p}")
    return p


def check_random_state(seed):
    """Turn ``seed`` into a :class:`numpy.random.Generator`."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
