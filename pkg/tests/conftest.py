import numpy as np
import pytest

from nash_mixer import FullRankState, LindbladGenerator

SIGMA = {
    "x": np.array([[0, 1], [1, 0]], complex),
    "y": np.array([[0, -1j], [1j, 0]], complex),
    "z": np.array([[1, 0], [0, -1]], complex),
}


def random_unitary(rng, d):
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_hermitian(rng, d):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (G + G.conj().T) / 2


def random_reversible(rng, d, min_p=0.05):
    """Random generator with KMS detailed balance w.r.t. a random full-rank state.

    Jumps U|i><j|U^dag at rates a_ij with p_j a_ij = p_i a_ji, plus a
    dephasing term diagonal in the same basis.
    """
    p = rng.dirichlet(np.ones(d)) * (1 - d * min_p) + min_p
    U = random_unitary(rng, d)
    ops = []
    for i in range(d):
        for j in range(i + 1, d):
            s = rng.exponential()
            # a_ij = s p_i, a_ji = s p_j
            ops.append(np.sqrt(s * p[i]) * np.outer(U[:, i], U[:, j].conj()))
            ops.append(np.sqrt(s * p[j]) * np.outer(U[:, j], U[:, i].conj()))
    D = U @ np.diag(rng.standard_normal(d)) @ U.conj().T
    ops.append(D)
    rho = FullRankState((U * p) @ U.conj().T)
    return LindbladGenerator(np.zeros((d, d)), ops), rho


def random_generator(rng, d, n_ops=2):
    H = random_hermitian(rng, d)
    ops = [rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for _ in range(n_ops)]
    return LindbladGenerator(H, ops)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one summary line per acceptance criterion
_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and rep.when == "call":
        _ACCEPTANCE.append((marker.args[0], item.function.__doc__.strip().splitlines()[0], rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
