import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nash_mixer.exceptions import DimensionMismatch, NotFullRank, NotHermitian, NotPrimitive
from nash_mixer.lindblad import (
    LindbladGenerator,
    apply_heisenberg,
    apply_schrodinger,
    check_detailed_balance,
    dirichlet_form,
    gamma_superoperator,
    stationary_state,
    symmetrize,
    tensor_power,
    to_superoperator,
)
from nash_mixer.lp_spaces import FullRankState, random_observables, variance
from nash_mixer.models import (
    DepolarizingSpec,
    QubitUnitalSpec,
    RingSpec,
    build_depolarizing,
    build_qubit_unital,
    build_ring,
)
from nash_mixer.numerics import unvec, vec

from conftest import SIGMA, random_generator, random_hermitian, random_reversible

seeds = st.integers(0, 2 ** 32 - 1)


@given(seeds, st.integers(1, 4))
@settings(max_examples=40)
def test_identity_is_annihilated_and_hermiticity_preserved(seed, d):
    rng = np.random.default_rng(seed)
    gen = random_generator(rng, d)
    np.testing.assert_allclose(apply_heisenberg(gen, np.eye(d)), 0, atol=1e-10)
    f = random_hermitian(rng, d)
    out = apply_heisenberg(gen, f)
    np.testing.assert_allclose(out, out.conj().T, atol=1e-10)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_superoperator_matches_direct_action(d):
    rng = np.random.default_rng(d)
    gen = random_generator(rng, d, n_ops=3)
    M = to_superoperator(gen).matrix
    F = random_observables(d, 100, 1) + 1j * random_observables(d, 100, 2)
    direct = apply_heisenberg(gen, F)
    via = unvec(F.reshape(100, -1) @ M.T, d)
    np.testing.assert_allclose(via, direct, atol=1e-10)
    S = to_superoperator(gen, "schrodinger")
    np.testing.assert_allclose(S.matrix, M.conj().T)
    np.testing.assert_allclose(S.apply(F), apply_schrodinger(gen, F), atol=1e-10)


def test_trace_preservation_in_schrodinger_picture():
    rng = np.random.default_rng(3)
    gen = random_generator(rng, 3)
    sig = random_observables(3, 100, 4)
    tr = np.einsum("nii->n", apply_schrodinger(gen, sig))
    np.testing.assert_allclose(tr, 0, atol=1e-10)


def test_zero_generator_has_zero_matrix():
    np.testing.assert_array_equal(to_superoperator(LindbladGenerator.zero(3)).matrix, 0)


def test_pure_hamiltonian_commutator():
    gen = LindbladGenerator(SIGMA["z"] / 2, [])
    M = to_superoperator(gen).matrix
    # i[sz/2, sx] = -sy
    np.testing.assert_allclose(unvec(M @ vec(SIGMA["x"])), -SIGMA["y"], atol=1e-14)


def test_depolarizing_action_and_spectrum():
    gen = build_depolarizing(DepolarizingSpec.uniform(1.0, 2))
    np.testing.assert_allclose(apply_heisenberg(gen, SIGMA["z"]), -SIGMA["z"], atol=1e-14)
    ev = np.sort(np.linalg.eigvals(to_superoperator(gen).matrix).real)
    np.testing.assert_allclose(ev, [-1, -1, -1, 0], atol=1e-12)


def test_validation_errors():
    with pytest.raises(NotHermitian):
        LindbladGenerator(np.array([[0, 1], [0, 0]]), [])
    with pytest.raises(DimensionMismatch):
        LindbladGenerator(np.eye(2), [np.eye(3)])
    with pytest.raises(DimensionMismatch):
        apply_heisenberg(LindbladGenerator.zero(2), np.eye(3))


def test_stationary_states_of_models():
    target = FullRankState.from_probabilities([0.6, 0.3, 0.1])
    rho = stationary_state(build_depolarizing(DepolarizingSpec(2.0, target)))
    np.testing.assert_allclose(rho.rho, target.rho, atol=1e-9)
    rho = stationary_state(build_ring(RingSpec(5)))
    np.testing.assert_allclose(rho.rho, np.eye(5) / 5, atol=1e-9)
    rho = stationary_state(build_qubit_unital(QubitUnitalSpec(1, 1.5, 2.5)))
    np.testing.assert_allclose(rho.rho, np.eye(2) / 2, atol=1e-9)


def test_stationary_state_residual():
    gen = random_generator(np.random.default_rng(8), 4)
    rho = stationary_state(gen)
    assert np.abs(apply_schrodinger(gen, rho.rho)).max() <= 1e-9
    assert np.trace(rho.rho).real == pytest.approx(1.0)


def test_non_primitive_and_rank_deficient_generators_are_rejected():
    with pytest.raises(NotPrimitive):
        stationary_state(LindbladGenerator.zero(2))
    with pytest.raises(NotPrimitive):
        stationary_state(LindbladGenerator(np.zeros((2, 2)), [SIGMA["z"]]))
    decay = np.array([[0, 1], [0, 0]], complex)
    with pytest.raises(NotFullRank):
        stationary_state(LindbladGenerator(np.zeros((2, 2)), [decay]))


def test_detailed_balance_examples():
    spec = DepolarizingSpec.uniform(1.0, 2)
    assert check_detailed_balance(build_depolarizing(spec), spec.target)[0]
    ring = RingSpec(6)
    rho = np.eye(6) / 6
    assert check_detailed_balance(build_ring(ring).dissipative_part(), rho)[0]
    ok, residual = check_detailed_balance(build_ring(ring), rho)
    assert not ok and residual > 1e-3


def test_detailed_balance_randomized_sweep_above_dimension_eight():
    ring = RingSpec(9)
    rho = np.eye(9) / 9
    assert check_detailed_balance(build_ring(ring).dissipative_part(), rho)[0]
    assert not check_detailed_balance(build_ring(ring), rho)[0]


@pytest.mark.parametrize("d", [2, 3, 4])
def test_symmetrization_hermitian_iff_reversible(d):
    rng = np.random.default_rng(d)
    gen, rho = random_reversible(rng, d)
    Lt = symmetrize(gen, rho).matrix
    np.testing.assert_allclose(Lt, Lt.conj().T, atol=1e-9)
    L = to_superoperator(gen).matrix
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh((Lt + Lt.conj().T) / 2)),
                               np.sort(np.linalg.eigvals(L).real), atol=1e-9)
    # second form: Gamma^{-1/2} L* Gamma^{1/2}
    W, Winv = gamma_superoperator(rho, 0.5), gamma_superoperator(rho, -0.5)
    np.testing.assert_allclose(Winv @ L.conj().T @ W, Lt, atol=1e-9)

    bad = random_generator(rng, d)
    Lb = symmetrize(bad, rho).matrix
    assert np.abs(Lb - Lb.conj().T).max() > 1e-6
    assert not check_detailed_balance(bad, rho)[0]


def test_symmetrization_at_maximally_mixed_state_is_identity_transform():
    gen = build_qubit_unital(QubitUnitalSpec(1, 2, 2))
    np.testing.assert_allclose(symmetrize(gen, np.eye(2) / 2).matrix, to_superoperator(gen).matrix, atol=1e-14)


def test_depolarizing_symmetrization_spectrum_non_uniform():
    spec = DepolarizingSpec(1.0, FullRankState.from_probabilities([0.75, 0.25]))
    Lt = symmetrize(build_depolarizing(spec), spec.target).matrix
    np.testing.assert_allclose(Lt, Lt.conj().T, atol=1e-12)
    np.testing.assert_allclose(np.linalg.eigvalsh(Lt), [-1, -1, -1, 0], atol=1e-12)


def test_dirichlet_form_properties():
    rng = np.random.default_rng(5)
    gen, rho = random_reversible(rng, 3)
    assert dirichlet_form(gen, np.eye(3), rho) == pytest.approx(0.0, abs=1e-12)
    F = random_observables(3, 200, 6)
    assert np.all(dirichlet_form(gen, F, rho) >= -1e-12)


def test_depolarizing_dirichlet_form_is_rate_times_variance():
    spec = DepolarizingSpec(1.7, FullRankState.from_probabilities([0.5, 0.3, 0.2]))
    gen = build_depolarizing(spec)
    F = random_observables(3, 100, 7)
    np.testing.assert_allclose(dirichlet_form(gen, F, spec.target), 1.7 * variance(F, spec.target), rtol=1e-10)


def test_ring_coherent_part_leaves_dirichlet_form_unchanged():
    spec = RingSpec(6)
    rho = np.eye(6) / 6
    F = random_observables(6, 100, 8)
    full = dirichlet_form(build_ring(spec), F, rho)
    diss = dirichlet_form(build_ring(spec).dissipative_part(), F, rho)
    np.testing.assert_allclose(full, diss, atol=1e-10)


def test_tensor_power_is_sum_of_local_generators():
    gen = build_qubit_unital(QubitUnitalSpec(1, 1.5, 2.5))
    g2 = tensor_power(gen, 2)
    assert g2.dim == 4
    f = random_hermitian(np.random.default_rng(0), 2)
    # product observable: L2(f x 1) = L(f) x 1
    np.testing.assert_allclose(apply_heisenberg(g2, np.kron(f, np.eye(2))),
                               np.kron(apply_heisenberg(gen, f), np.eye(2)), atol=1e-12)
