"""Nash inequalities: sampled verification, constant fitting, and the bounds
they imply (ultracontractivity, converse, Log-Sobolev, eigenvalue counting,
mixing times).

Type I:   Var(f)^{1+2/nu}     <= C E(f) ||f||_1^{4/nu}
Type II:  ||f||_2^{2+4/nu}    <= C (E(f) + ||f||_2^2 / T) ||f||_1^{4/nu}

Sampling can falsify an inequality but never prove it.  A passing
:class:`VerificationReport` therefore means "no counterexample among the
sampled and locally refined observables".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    BelowCutoff,
    BeyondCutoff,
    CutoffViolation,
    DegenerateObservable,
    InvalidCertificate,
    InvalidExponent,
    NotUnital,
)
from .lindblad import apply_schrodinger, tensor_power
from .lp_spaces import FullRankState, weighted_norm
from .numerics import hermitian_part, unvec
from .semigroup import (
    Semigroup,
    _as_semigroup,
    norm_1to2,
    spectral_gap,
    time_grid,
)
from .validation import check_observables

KINDS = ("I", "II")
PASS_SLACK = 1e-9
DEGENERACY_TOL = 1e-14
FAMILY_CYCLE = ("gaussian",) * 14 + ("rank_one",) * 3 + ("eigen",) * 3


@dataclass(frozen=True)
class NashCertificate:
    kind: str
    nu: float
    c: float
    t_cutoff: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidCertificate(f"kind must be 'I' or 'II', got {self.kind!r}")
        if not (self.nu > 0 and self.c > 0):
            raise InvalidCertificate("nu and C must be positive")
        if self.kind == "II":
            if self.t_cutoff is None or not self.t_cutoff > 0:
                raise InvalidCertificate("type II certificates need a positive t_cutoff")
        elif self.t_cutoff is not None:
            raise InvalidCertificate("type I certificates carry no t_cutoff")

    @property
    def burn_in(self):
        """nu C / 4, the time at which the ultracontractive bound reaches 1."""
        return self.nu * self.c / 4

    @property
    def window_ok(self):
        return self.kind == "I" or self.burn_in <= self.t_cutoff

    def scaled(self, factor):
        return NashCertificate(self.kind, self.nu, self.c * factor, self.t_cutoff)

    def to_dict(self):
        out = {"kind": self.kind, "nu": self.nu, "c": self.c}
        if self.t_cutoff is not None:
            out["t_cutoff"] = self.t_cutoff
        return out


@dataclass
class VerificationReport:
    n_samples: int
    worst_ratio: float
    witness: np.ndarray
    passed: bool
    family_max: dict = field(default_factory=dict)
    n_skipped: int = 0
    refined_from: float | None = None

    def to_dict(self):
        from .io import matrix_to_json

        return {
            "n_samples": self.n_samples,
            "worst_ratio": self.worst_ratio,
            "passed": self.passed,
            "family_max": self.family_max,
            "n_skipped": self.n_skipped,
            "refined_from": self.refined_from,
            "witness": matrix_to_json(self.witness),
        }


# --------------------------------------------------------------------------
# ratio evaluation
# --------------------------------------------------------------------------


class _Quantities:
    """Batched Var, ||f||_2^2, ||f||_1 and E(f) for one semigroup."""

    def __init__(self, sg):
        self.sg = sg
        self.WL = sg.W @ sg.superop
        self.R = sg.rho.power(0.5)

    def __call__(self, F):
        sg = self.sg
        X = F.reshape(len(F), -1)
        Wf = X @ sg.W.T
        WLf = X @ self.WL.T
        norm2 = np.einsum("ni,ni->n", Wf.conj(), Wf).real
        energy = -np.einsum("ni,ni->n", Wf.conj(), WLf).real
        mean = np.einsum("ij,nji->n", sg.rho.rho, F).real
        var = np.maximum(norm2 - mean ** 2, 0.0)
        norm1 = np.abs(np.linalg.eigvalsh(hermitian_part(self.R @ F @ self.R))).sum(axis=-1)
        return var, norm2, norm1, energy


def _ratios(q, F, kind, nu, c, t_cutoff):
    """Return (ratios, skipped mask).  Degenerate observables get ratio 0."""
    var, norm2, norm1, energy = q(F)
    scale = np.maximum(norm2, 1e-300)
    if kind == "I":
        skip = (var <= DEGENERACY_TOL * scale) | (energy <= DEGENERACY_TOL * scale)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = var ** (1 + 2 / nu) / (c * energy * norm1 ** (4 / nu))
    else:
        skip = norm2 <= 1e-300
        with np.errstate(divide="ignore", invalid="ignore"):
            r = norm2 ** (1 + 2 / nu) / (c * (np.maximum(energy, 0.0) + norm2 / t_cutoff) * norm1 ** (4 / nu))
    r = np.where(skip, 0.0, r)
    return r, skip


def nash_ratio_I(gen, rho, f, nu, c):
    """LHS / RHS of the type I inequality at f (<= 1 means it holds at f)."""
    sg = _as_semigroup(gen, rho)
    F = check_observables(f, sg.dim)
    var, norm2, norm1, energy = _Quantities(sg)(F)
    if var[0] <= DEGENERACY_TOL * max(norm2[0], 1e-300):
        return 0.0
    if energy[0] <= DEGENERACY_TOL * norm2[0]:
        raise DegenerateObservable("Dirichlet form vanishes on an observable with positive variance")
    return float(var[0] ** (1 + 2 / nu) / (c * energy[0] * norm1[0] ** (4 / nu)))


def nash_ratio_II(gen, rho, f, nu, c, t_cutoff):
    sg = _as_semigroup(gen, rho)
    F = check_observables(f, sg.dim)
    r, skip = _ratios(_Quantities(sg), F, "II", nu, c, t_cutoff)
    if skip[0]:
        raise DegenerateObservable("zero observable")
    return float(r[0])


def nash_ratios(gen, rho, F, cert):
    """Ratios for a stack of observables; degenerate ones get 0."""
    sg = _as_semigroup(gen, rho)
    F = check_observables(F, sg.dim)
    return _ratios(_Quantities(sg), F, cert.kind, cert.nu, cert.c, cert.t_cutoff)[0]


def nash_ratio(gen, rho, f, cert):
    if cert.kind == "I":
        return nash_ratio_I(gen, rho, f, cert.nu, cert.c)
    return nash_ratio_II(gen, rho, f, cert.nu, cert.c, cert.t_cutoff)


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------


def _mode_basis(sg):
    """Eigen-observables of the Hermitian part of -L~, mapped back by Gamma^{-1/2}."""
    Lt = sg.symmetrized
    K = -(Lt + Lt.conj().T) / 2
    _, V = np.linalg.eigh(K)
    modes = unvec((sg.W_inv @ V).T, sg.dim)
    return modes[1:]


def sample_observables(sg, n_samples, seed=0):
    """Deterministic mixed sample; observable i depends only on (seed, i).

    Families cycle with period 20: 14 Gaussian Hermitian, 3 rank-one
    projectors, 3 eigen-observables of the symmetrized generator with a random
    phase and (half of the time) a random multiple of the identity added.
    """
    d = sg.dim
    modes = _mode_basis(sg)
    rho_vecs = sg.rho.eigensystem.eigenvectors
    F = np.empty((n_samples, d, d), complex)
    labels = []
    for i in range(n_samples):
        rng = np.random.default_rng([int(seed), i])
        fam = FAMILY_CYCLE[i % len(FAMILY_CYCLE)]
        if fam == "gaussian":
            G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            f = (G + G.conj().T) / 2
        elif fam == "rank_one":
            if rng.random() < 0.5:
                psi = rho_vecs[:, rng.integers(d)]
            else:
                psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                psi /= np.linalg.norm(psi)
            f = np.outer(psi, psi.conj())
        else:
            m = modes[rng.integers(len(modes))] * np.exp(2j * np.pi * rng.random())
            f = (m + m.conj().T) / 2
            f = f / max(np.abs(f).max(), 1e-300)
            if rng.random() < 0.5:
                f = f + rng.standard_normal() * np.eye(d)
        F[i] = f
        labels.append(fam)
    return F, np.array(labels)


def _refine(q, f0, r0, kind, nu, c, t_cutoff, steps, seed):
    """Stochastic hill climb on the ratio starting from f0."""
    d = f0.shape[0]
    rng = np.random.default_rng([int(seed), 0x5EED])
    f, r = f0, r0
    step = 0.1
    for _ in range(steps):
        G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        G = (G + G.conj().T) / 2
        cand = f + step * np.linalg.norm(f) * G / np.linalg.norm(G)
        rc, skip = _ratios(q, cand[None], kind, nu, c, t_cutoff)
        if not skip[0] and np.isfinite(rc[0]) and rc[0] > r:
            f, r = cand, float(rc[0])
            step *= 1.5
        else:
            step *= 0.8
        step = min(max(step, 1e-6), 1.0)
    return f, r


def _evaluate(sg, kind, nu, c, t_cutoff, n_samples, seed, refine_steps):
    q = _Quantities(sg)
    F, labels = sample_observables(sg, n_samples, seed)
    r, skip = _ratios(q, F, kind, nu, c, t_cutoff)
    family_max = {str(fam): float(r[labels == fam].max(initial=0.0)) for fam in dict.fromkeys(labels)}
    i = int(np.argmax(r))
    witness, worst = F[i], float(r[i])
    refined_from = None
    if refine_steps:
        refined_from = worst
        witness, worst = _refine(q, witness, worst, kind, nu, c, t_cutoff, refine_steps, seed)
    return witness, worst, family_max, int(skip.sum()), refined_from


def verify_nash(gen, rho, cert, n_samples=2000, seed=0, refine_steps=200):
    """Search for observables violating ``cert``."""
    sg = _as_semigroup(gen, rho)
    witness, worst, fam, n_skip, refined_from = _evaluate(
        sg, cert.kind, cert.nu, cert.c, cert.t_cutoff, n_samples, seed, refine_steps
    )
    return VerificationReport(n_samples, worst, witness, worst <= 1 + PASS_SLACK, fam, n_skip, refined_from)


def fit_c(gen, rho, kind, nu, t_cutoff=None, n_samples=2000, seed=0, refine_steps=0):
    """Smallest C for which every sampled observable satisfies the inequality.

    This is a lower bound on the optimal constant.  Without refinement the
    sample set for ``n`` is a prefix of the one for ``n + 1``, so the fitted
    value is non-decreasing in ``n_samples``.
    """
    sg = _as_semigroup(gen, rho)
    if kind == "II" and not (t_cutoff and t_cutoff > 0):
        raise InvalidCertificate("type II fit needs a positive t_cutoff")
    _, worst, _, _, _ = _evaluate(sg, kind, nu, 1.0, t_cutoff, n_samples, seed, refine_steps)
    return worst


def fit_c_on(gen, rho, F, kind, nu, t_cutoff=None):
    """fit_c on an explicit set of observables."""
    sg = _as_semigroup(gen, rho)
    F = check_observables(F, sg.dim)
    r, _ = _ratios(_Quantities(sg), F, kind, nu, 1.0, t_cutoff)
    return float(r.max())


# --------------------------------------------------------------------------
# bound converters
# --------------------------------------------------------------------------


def ultracontractive_bound(cert, t):
    """Bound on ||S_t - rho||_{1->2} (type I) or ||S_t||_{1->2} (type II, t <= T)."""
    t = float(t)
    if not t > 0:
        raise ValueError("ultracontractive bounds need t > 0")
    base = (cert.nu * cert.c / (4 * t)) ** (cert.nu / 4)
    if cert.kind == "I":
        return base
    if t > cert.t_cutoff:
        raise BeyondCutoff(f"t = {t} exceeds the cutoff T = {cert.t_cutoff}")
    return math.exp(t / cert.t_cutoff) * base


def converse_nash(nu, c_ultra, kind="I", t_cutoff=None):
    """Nash certificate from an ultracontractive bound (C/t)^{nu/4}."""
    return NashCertificate(kind, nu, 2 ** (2 + 4 / nu) * c_ultra, t_cutoff)


def fit_ultracontractive_constant(sg, nu, kind="I", t_grid=None, t_cutoff=None, **norm_kw):
    """Smallest C with ||S_t (- rho)||_{1->2} <= (C/t)^{nu/4} on ``t_grid``."""
    if t_grid is None:
        t_grid = time_grid(spectral_gap(sg))
    t_grid = np.asarray(t_grid, float)
    if kind == "II":
        t_grid = t_grid[t_grid <= t_cutoff]
    vals = [t * norm_1to2(sg, t, deviation=(kind == "I"), **norm_kw) ** (4 / nu) for t in t_grid]
    return float(max(vals))


def ls_lower_bound(cert, gap=None, t0=None, strict=True):
    """Lower bound on the Log-Sobolev constant.

    Type I: 2 / (nu C).  Type II: gap / (2 (1 + gap t0 + nu/4 log(nu C / 4 t0))),
    maximized over t0 in (0, T] when ``t0`` is omitted (the optimum is
    t0 = min(nu / (4 gap), T)).  The type II bound assumes nu C / 4 <= T;
    ``strict=False`` evaluates the formula anyway.
    """
    if cert.kind == "I":
        return 2 / (cert.nu * cert.c)
    if gap is None or not gap > 0:
        raise ValueError("type II Log-Sobolev bound needs the spectral gap")
    T = cert.t_cutoff
    if strict and not cert.window_ok:
        raise CutoffViolation(f"nu C / 4 = {cert.burn_in:.6g} exceeds T = {T:.6g}")
    if t0 is None:
        t0 = min(cert.nu / (4 * gap), T)
    elif not 0 < t0 <= T:
        raise BeyondCutoff(f"t0 = {t0} must lie in (0, T = {T}]")
    den = 2 * (1 + gap * t0 + cert.nu / 4 * math.log(cert.nu * cert.c / (4 * t0)))
    return gap / den


def counting_bound(cert, s):
    """Upper bound on the eigenvalue counting function N(s)."""
    s = float(s)
    if s < 0:
        raise ValueError("s must be non-negative")
    core = (cert.nu * cert.c * s / 2) ** (cert.nu / 2)
    if cert.kind == "I":
        return 1 + math.e * core
    if s < 1 / cert.t_cutoff:
        raise BelowCutoff(f"type II counting bound needs s >= 1/T = {1 / cert.t_cutoff}")
    return math.e ** 3 * core


def eigenvalue_lower_bounds(cert, j_max):
    """Lower bounds on lambda_0..lambda_{j_max}; NaN where the bound does not apply."""
    j = np.arange(j_max + 1, dtype=float)
    nu, c = cert.nu, cert.c
    if cert.kind == "I":
        return 2 * j ** (2 / nu) / (math.exp(2 / nu) * nu * c)
    out = 2 * (j + 1) ** (2 / nu) / (math.exp(6 / nu) * nu * c)
    threshold = math.e ** 3 * (nu * c / (2 * cert.t_cutoff)) ** (nu / 2) - 1
    return np.where(j > threshold, out, np.nan)


# --------------------------------------------------------------------------
# mixing times
# --------------------------------------------------------------------------


@dataclass
class MixingBoundReport:
    epsilon: float
    gap: float
    t_generic: float
    t_nash: float | None = None
    split_time: float | None = None
    prefactor: float | None = None
    window_ok: bool | None = None
    gap_condition_ok: bool | None = None
    certificate: NashCertificate | None = None
    inverse_norm: float = 1.0
    curves: dict = field(default_factory=dict)

    def generic_bound(self, t):
        return np.minimum(2.0, np.sqrt(self.inverse_norm) * np.exp(-self.gap * np.asarray(t, float)))

    def nash_bound(self, t):
        if self.t_nash is None:
            return np.full(np.shape(t), np.nan)
        t = np.asarray(t, float)
        return np.minimum(2.0, 2 * self.prefactor * np.exp(-self.gap * (t - self.split_time)))

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "gap": self.gap,
            "t_generic": self.t_generic,
            "t_nash": self.t_nash,
            "split_time": self.split_time,
            "prefactor": self.prefactor,
            "window_ok": self.window_ok,
            "gap_condition_ok": self.gap_condition_ok,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
            "curves": {k: [float(x) for x in v] for k, v in self.curves.items()},
        }


def mixing_time(gen, rho, epsilon, cert=None, strict=False):
    """Mixing-time estimates from the spectral gap and from a Nash certificate.

    Generic:  log(sqrt(||rho^{-1}||) / eps) / gap.
    Type I:   nu C / 4 + log(2 / eps) / gap.
    Type II:  split the evolution at t1 = min(nu C / 4, T), where the type II
              ultracontractive bound B = exp(t1/T) (nu C / 4 t1)^{nu/4} is
              still valid, giving t1 + log(2 B / eps) / gap.  With
              ``strict=True`` a certificate with nu C / 4 > T is rejected.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    sg = _as_semigroup(gen, rho)
    sg.require_reversible()
    gap = spectral_gap(sg)
    inv = sg.rho.inverse_norm
    rep = MixingBoundReport(epsilon, gap, math.log(math.sqrt(inv) / epsilon) / gap, inverse_norm=inv)
    if cert is None:
        return rep
    rep.certificate = cert
    rep.window_ok = cert.window_ok
    if cert.kind == "I":
        t1, B = cert.burn_in, 1.0
    else:
        rep.gap_condition_ok = cert.t_cutoff >= cert.nu / (4 * gap)
        if strict and not cert.window_ok:
            raise CutoffViolation(f"nu C / 4 = {cert.burn_in:.6g} exceeds T = {cert.t_cutoff:.6g}")
        t1 = min(cert.burn_in, cert.t_cutoff)
        B = ultracontractive_bound(cert, t1)
    rep.split_time, rep.prefactor = t1, B
    rep.t_nash = t1 + math.log(2 * B / epsilon) / gap
    return rep


# --------------------------------------------------------------------------
# Sobolev => Nash
# --------------------------------------------------------------------------


@dataclass
class SobolevReport:
    n_samples: int
    n_sobolev_hold: int
    n_violations: int
    worst_nash_given_sobolev: float
    worst_holder_gap: float

    @property
    def passed(self):
        return self.n_violations == 0


def holder_exponent(nu):
    if not nu > 2:
        raise InvalidExponent(f"the Sobolev exponent 2 nu / (nu - 2) needs nu > 2, got {nu}")
    return 2 * nu / (nu - 2)


def sobolev_implies_nash_check(gen, rho, nu, c, kind="II", n_samples=1000, seed=0, t_cutoff=None):
    """Pointwise check that the Sobolev inequality at f implies the Nash one.

    Sobolev (with q = 2 nu / (nu - 2)):
        I:  ||f - rho(f)||_q^2 <= C E(f)
        II: ||f||_q^2          <= C (E(f) + ||f||_2^2 / T)
    Type I samples are centred, so that Var(f) = ||f||_2^2 and both sides
    refer to the same observable.
    """
    q_exp = holder_exponent(nu)
    sg = _as_semigroup(gen, rho)
    if kind == "II" and not (t_cutoff and t_cutoff > 0):
        raise InvalidCertificate("type II check needs a positive t_cutoff")
    F, _ = sample_observables(sg, n_samples, seed)
    if kind == "I":
        mean = np.einsum("ij,nji->n", sg.rho.rho, F).real
        F = F - mean[:, None, None] * np.eye(sg.dim)
    var, norm2, norm1, energy = _Quantities(sg)(F)
    normq = weighted_norm(F, sg.rho, q_exp)
    if kind == "I":
        rhs = c * energy
    else:
        rhs = c * (np.maximum(energy, 0.0) + norm2 / t_cutoff)
    ok = rhs > DEGENERACY_TOL * norm2
    sob = np.where(ok, normq ** 2 / np.where(ok, rhs, 1.0), np.inf)
    nash = np.where(ok, norm2 ** (1 + 2 / nu) / (np.where(ok, rhs, 1.0) * norm1 ** (4 / nu)), np.inf)
    holds = sob <= 1
    violations = holds & (nash > 1 + PASS_SLACK)
    holder = norm2 ** (1 + 2 / nu) - normq ** 2 * norm1 ** (4 / nu)
    return SobolevReport(
        n_samples,
        int(holds.sum()),
        int(violations.sum()),
        float(nash[holds].max(initial=0.0)),
        float((holder / np.maximum(norm2 ** (1 + 2 / nu), 1e-300)).max()),
    )


# --------------------------------------------------------------------------
# tensor powers
# --------------------------------------------------------------------------


@dataclass
class TensorCheckReport:
    t_grid: np.ndarray
    single: np.ndarray
    tensor: np.ndarray
    n_copies: int = 2

    @property
    def max_abs_error(self):
        return float(np.abs(self.tensor - self.single ** self.n_copies).max())

    def certificate_caveat(self, gap):
        """Whether the n-copy type II certificate (nu = n, T = 1/(2 gap)) keeps T >= nu/(4 gap)."""
        return self.n_copies / (4 * gap) <= 1 / (2 * gap)


def tensor_multiplicativity_check(gen, t_grid, n_copies=2, **norm_kw):
    """Compare ||S_t^{(x)n}||_{1->2} with ||S_t||_{1->2}^n at maximally mixed states."""
    if gen.dim != 2:
        raise NotUnital(f"expected a qubit generator, got dimension {gen.dim}")
    if np.abs(apply_schrodinger(gen, np.eye(2))).max() > 1e-10:
        raise NotUnital("the generator does not preserve the identity state")
    one = Semigroup(gen, FullRankState.maximally_mixed(2))
    many = Semigroup(tensor_power(gen, n_copies), FullRankState.maximally_mixed(2 ** n_copies))
    t_grid = np.asarray(t_grid, float)
    single = np.array([norm_1to2(one, t, **norm_kw) for t in t_grid])
    tensor = np.array([norm_1to2(many, t, **norm_kw) for t in t_grid])
    return TensorCheckReport(t_grid, single, tensor, n_copies)
