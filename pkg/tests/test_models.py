import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from nash_mixer.exceptions import NotCompletelyPositive
from nash_mixer.lindblad import (
    LindbladGenerator,
    apply_heisenberg,
    apply_schrodinger,
    check_detailed_balance,
    dirichlet_form,
    stationary_state,
    to_superoperator,
)
from nash_mixer.lp_spaces import FullRankState, random_observables, random_state, variance
from nash_mixer.models import (
    DepolarizingSpec,
    QubitUnitalSpec,
    RingSpec,
    apply_depolarizing,
    build_depolarizing,
    build_qubit_tensor,
    build_qubit_unital,
    build_ring,
    depolarizing_mixing_estimates,
    depolarizing_nash_certificate,
    depolarizing_optimal_nu,
    pauli_decay_rates,
    qubit_nash_certificate,
    qubit_norm_squared,
    qubit_tensor_certificates,
    ring_diagonal_spectrum,
    ring_gap,
    ring_nash_certificates,
    ring_norm_bound,
    ring_spectrum,
    ring_ultracontractive_constant,
)
from nash_mixer.semigroup import Semigroup, norm_1to2, spectral_report

from conftest import SIGMA


def diagonal_block(gen):
    """-L restricted to diagonal observables (index i*d + i)."""
    d = gen.dim
    M = -to_superoperator(gen).matrix
    idx = np.arange(d) * (d + 1)
    return M[np.ix_(idx, idx)]


# depolarizing -----------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3, 4])
def test_depolarizing_realization_matches_formula(d):
    spec = DepolarizingSpec(0.9, random_state(d, d))
    gen = build_depolarizing(spec)
    F = random_observables(d, 50, 1) + 1j * random_observables(d, 50, 2)
    np.testing.assert_allclose(apply_heisenberg(gen, F), apply_depolarizing(spec, F), atol=1e-10)
    np.testing.assert_allclose(stationary_state(gen).rho, spec.target.rho, atol=1e-9)
    assert check_detailed_balance(gen, spec.target)[0]
    lam = spectral_report(Semigroup(gen, spec.target)).eigenvalues
    np.testing.assert_allclose(lam, [0] + [0.9] * (d * d - 1), atol=1e-10)
    H = random_observables(d, 50, 3)
    np.testing.assert_allclose(dirichlet_form(gen, H, spec.target), 0.9 * variance(H, spec.target), rtol=1e-9)


def test_depolarizing_certificate_constants():
    spec = DepolarizingSpec.uniform(1.0, 2)
    assert depolarizing_nash_certificate(spec, 2).c == pytest.approx(2.0)
    for d, nu, gamma in [(3, 1, 1.0), (4, 2, 0.5), (5, 4, 2.0)]:
        cert = depolarizing_nash_certificate(DepolarizingSpec.uniform(gamma, d), nu)
        assert cert.c == pytest.approx(d ** (2 / nu) / gamma)
        # equality case (C gamma)^{nu/2} = ||rho^{-1}||
        assert (cert.c * gamma) ** (nu / 2) == pytest.approx(d)


def test_depolarizing_optimal_nu_matches_numerical_minimum():
    spec = DepolarizingSpec(1.5, FullRankState.from_probabilities([0.8, 0.15, 0.05]))
    burn_in = lambda nu: depolarizing_nash_certificate(spec, nu).burn_in  # noqa: E731
    res = minimize_scalar(burn_in, bounds=(0.1, 50), method="bounded", options={"xatol": 1e-10})
    assert depolarizing_optimal_nu(spec) == pytest.approx(res.x, rel=1e-5)
    est = depolarizing_mixing_estimates(spec)
    assert est["optimal_burn_in"] == pytest.approx(res.fun, rel=1e-9)
    assert est["closed_form_burn_in"] == pytest.approx(est["optimal_burn_in"], rel=1e-12)
    assert est["quadratic_rate_expression"] == pytest.approx(est["closed_form_burn_in"] / 1.5)


# qubit ----------------------------------------------------------------------------


@pytest.mark.parametrize("rates", [(2, 2, 2), (1, 1, 2), (1, 1.5, 2.5), (0.3, 0.4, 0.5)])
def test_qubit_decay_rates_are_reproduced(rates):
    spec = QubitUnitalSpec(*rates)
    gen = build_qubit_unital(spec)
    np.testing.assert_allclose(pauli_decay_rates(gen), rates, atol=1e-10)
    np.testing.assert_allclose(apply_schrodinger(gen, np.eye(2)), 0, atol=1e-12)
    assert check_detailed_balance(gen, np.eye(2) / 2)[0]


def test_qubit_jump_rates():
    np.testing.assert_allclose(QubitUnitalSpec(2, 2, 2).jump_rates, [0.5, 0.5, 0.5])
    np.testing.assert_allclose(QubitUnitalSpec(1, 1, 2).jump_rates, [0.5, 0.5, 0.0])
    with pytest.raises(NotCompletelyPositive):
        build_qubit_unital(QubitUnitalSpec(1, 1, 5))
    with pytest.raises(NotCompletelyPositive):
        build_qubit_unital(QubitUnitalSpec(0, 1, 1))


def test_qubit_depolarizing_like_transfer_matrix():
    gen = build_qubit_unital(QubitUnitalSpec(2, 2, 2))
    sg = Semigroup(gen, np.eye(2) / 2)
    S = sg.propagator(0.3)
    for s in SIGMA.values():
        out = (S @ s.reshape(-1)).reshape(2, 2)
        np.testing.assert_allclose(out, math.exp(-0.6) * s, atol=1e-12)


def test_qubit_hamiltonian_in_pauli_frame_leaves_dirichlet_form():
    gen = build_qubit_unital(QubitUnitalSpec(1, 1.5, 2.5))
    with_h = LindbladGenerator(0.7 * SIGMA["z"], gen.lindblad_ops)
    F = random_observables(2, 100, 3)
    rho = np.eye(2) / 2
    np.testing.assert_allclose(dirichlet_form(with_h, F, rho), dirichlet_form(gen, F, rho), atol=1e-12)


def test_qubit_certificate_constants():
    cert = qubit_nash_certificate(QubitUnitalSpec(1, 2, 3))
    assert (cert.kind, cert.nu, cert.c, cert.t_cutoff) == ("II", 1, pytest.approx(64), 0.5)
    cert = qubit_nash_certificate(QubitUnitalSpec(2, 2, 3))
    assert cert.c == pytest.approx(32) and cert.t_cutoff == pytest.approx(0.25)


def test_qubit_tensor_certificates_and_caveat():
    spec = QubitUnitalSpec(1, 1.5, 2.5)
    two = qubit_tensor_certificates(spec, 2)
    assert two["stated"].c == pytest.approx(2 ** 4)
    assert two["alternative"].c == pytest.approx(2 ** 4 * 2)
    assert two["gap_condition_ok"]
    assert not qubit_tensor_certificates(spec, 3)["gap_condition_ok"]
    assert build_qubit_tensor(spec, 3).dim == 8


def test_qubit_norm_closed_form_helper():
    spec = QubitUnitalSpec(1, 1.5, 2.5)
    sg = Semigroup(build_qubit_unital(spec), np.eye(2) / 2)
    assert norm_1to2(sg, 0.7) ** 2 == pytest.approx(qubit_norm_squared(spec, 0.7), abs=1e-9)


# ring -----------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_ring_basic_structure(n):
    spec = RingSpec(n)
    gen = build_ring(spec)
    np.testing.assert_allclose(stationary_state(gen).rho, np.eye(n) / n, atol=1e-9)
    diss = gen.dissipative_part()
    assert check_detailed_balance(diss, np.eye(n) / n)[0]
    lam = spectral_report(Semigroup(diss, np.eye(n) / n)).eigenvalues
    np.testing.assert_allclose(lam, ring_spectrum(n), atol=1e-9)
    assert lam[1] >= n ** -2
    assert lam[1] == pytest.approx(ring_gap(n))


def test_two_site_ring():
    spec = RingSpec(2, coherent=False)
    diag = np.sort(np.linalg.eigvals(diagonal_block(build_ring(spec))).real)
    np.testing.assert_allclose(diag, [0, 4], atol=1e-12)
    # the coherence sector (eigenvalue 2) sits below the diagonal-sector gap
    assert ring_gap(2) == 2.0


def test_ring_diagonal_sector_degeneracy():
    n = 7
    lam = ring_diagonal_spectrum(n)
    for m in range(1, n):
        assert lam[m] == pytest.approx(lam[n - m])
    diag = np.sort(np.linalg.eigvals(diagonal_block(build_ring(RingSpec(n)).dissipative_part())).real)
    np.testing.assert_allclose(diag, np.sort(lam), atol=1e-10)


def test_ring_custom_hamiltonian():
    H = np.diag(np.arange(4.0))
    assert np.allclose(build_ring(RingSpec(4, hamiltonian=H)).hamiltonian, H)
    assert np.allclose(build_ring(RingSpec(4, coherent=False)).hamiltonian, 0)
    with pytest.raises(ValueError):
        RingSpec(4, hamiltonian=np.eye(3))
    with pytest.raises(ValueError):
        RingSpec(1)


def test_ring_coherent_dirichlet_form_equality():
    spec = RingSpec(6)
    rho = np.eye(6) / 6
    F = random_observables(6, 1000, 11)
    np.testing.assert_allclose(dirichlet_form(build_ring(spec), F, rho),
                               dirichlet_form(build_ring(spec).dissipative_part(), F, rho), atol=1e-10)


def test_ring_norm_bound_values():
    spec = RingSpec(8)
    exact, simplified = ring_norm_bound(spec, 4.0)
    assert simplified == pytest.approx(math.sqrt(128))
    lam = ring_diagonal_spectrum(8)[1:]
    assert exact == pytest.approx(1 + np.exp(-8 * lam).sum() + 64 * math.exp(-16))
    with pytest.raises(ValueError):
        ring_norm_bound(spec, 0.0)


def test_ring_measured_norm_below_exact_sum_below_simplified():
    spec = RingSpec(8)
    sg = Semigroup(build_ring(spec).dissipative_part())
    t = np.linspace(spec.cutoff / 12, spec.cutoff, 12)
    exact, simplified = ring_norm_bound(spec, t)
    assert np.all(exact <= simplified)
    measured = np.array([norm_1to2(sg, x, n_restarts=16) ** 2 for x in t])
    assert np.all(measured <= exact * (1 + 1e-9))


def test_ring_simplified_bound_fails_below_exact_sum_for_large_rings():
    """For 32 sites the closed-form simplification undercuts the exact sum at small t."""
    exact, simplified = ring_norm_bound(RingSpec(32), 0.01)
    assert exact > simplified


def test_ring_certificates():
    spec = RingSpec(8)
    assert spec.cutoff == 4.0
    assert ring_ultracontractive_constant(spec) == 512
    certs = ring_nash_certificates(spec)
    assert certs["derived"].c == 2 ** 9 * 64
    assert certs["printed"].c == 2 ** 10 * 64
    assert certs["derived"].t_cutoff == certs["printed"].t_cutoff == 4.0
