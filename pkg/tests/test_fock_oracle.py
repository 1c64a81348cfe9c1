import math

import numpy as np
import pytest

from services import amplitudes, fock_oracle
from utils.exceptions import InvalidParameter, SizeCapExceeded


# =============================================================================
# MAJORANA ALGEBRA AND EPR STATES
# =============================================================================

def test_majoranas_anticommute():
    algebra = fock_oracle.build_majorana_ops(6)
    assert algebra.dimension == 8
    for i in range(6):
        for j in range(6):
            a, b = algebra.dense(i), algebra.dense(j)
            expected = np.eye(8) if i == j else np.zeros((8, 8))
            np.testing.assert_allclose(a @ b + b @ a, expected, atol=1e-14)


def test_majorana_mode_checks():
    with pytest.raises(InvalidParameter):
        fock_oracle.build_majorana_ops(3)
    with pytest.raises(SizeCapExceeded):
        fock_oracle.build_majorana_ops(22)


def test_interleaved_epr_is_vacuum():
    state = fock_oracle.epr_state(3)
    assert abs(state.vector[0]) == pytest.approx(1.0)


@pytest.mark.parametrize("layout", ["interleaved", "blocked"])
def test_epr_state_is_annihilated(layout):
    pairs = 3
    state = fock_oracle.epr_state(pairs, layout=layout)
    gamma = fock_oracle.build_majorana_ops(2 * pairs).matrices
    indices = [(2 * j, 2 * j + 1) for j in range(pairs)] if layout == "interleaved" else \
        [(j, pairs + j) for j in range(pairs)]
    for psi, chi in indices:
        residual = (gamma[psi] + 1j * gamma[chi]) @ state.vector
        assert np.linalg.norm(residual) < 1e-12


def test_epr_unknown_layout():
    with pytest.raises(InvalidParameter):
        fock_oracle.epr_state(2, layout="diagonal")


# =============================================================================
# AMPLITUDES AGAINST THE CLOSED FORMS
# =============================================================================

@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("T", [0.0, 0.5, 2.0])
def test_single_chain_amplitude(n, T):
    """Test the growth-stripped single-chain amplitude against the momentum product."""
    oracle = fock_oracle.oracle_pair_amplitude((n,), 0.0, 1.0, T, chains=1, strip=n / 2.0)
    assert oracle == pytest.approx(amplitudes.unitary_cycle_transient(n, T), rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("theta", [0.0, 0.3, math.pi / 4, 1.2, math.pi / 2])
def test_two_chain_amplitude(n, theta):
    """Test the finite-time two-chain amplitude against the momentum product."""
    for T in (0.5, 1.0, 2.0):
        oracle = fock_oracle.oracle_pair_amplitude(
            (n,), theta, 1.0, T, chains=2, strip=amplitudes.coupled_growth_rate(n, 1.0)
        )
        assert oracle == pytest.approx(amplitudes.monitored_cycle_transient(n, theta, T), rel=1e-9)


def test_two_chain_amplitude_late_time():
    theta = 0.6
    oracle = fock_oracle.oracle_pair_amplitude((3,), theta, 1.0, 20.0, chains=2, strip=3.0)
    assert oracle == pytest.approx(amplitudes.monitored_cycle_factor(3, theta), rel=1e-9)


def test_oracle_cycle_amplitude_unstripped():
    # H = Lambda Z / 2 on the vacuum
    assert fock_oracle.oracle_cycle_amplitude(1, 0.0, 0.8, 1.5, chains=1) == pytest.approx(math.exp(0.6))


def test_amplitude_at_zero_time_is_one():
    assert fock_oracle.oracle_pair_amplitude((2, 1), 0.4, 1.0, 0.0, chains=2) == pytest.approx(1.0)


def test_hamiltonian_checks():
    with pytest.raises(InvalidParameter):
        fock_oracle.cycle_hamiltonian((1,), 0.3, 1.0, chains=3)
    with pytest.raises(SizeCapExceeded):
        fock_oracle.cycle_hamiltonian((3, 3), 0.3, 1.0, chains=2)
    with pytest.raises(InvalidParameter):
        fock_oracle.oracle_pair_amplitude((1,), 0.3, 1.0, -1.0, chains=1)


def test_hamiltonian_is_hermitian():
    H = fock_oracle.cycle_hamiltonian((2, 1), 0.7, 1.0, chains=2).toarray()
    np.testing.assert_allclose(H, H.conj().T, atol=1e-14)


# =============================================================================
# REPLICA TRACES
# =============================================================================

def test_random_density_matrix(rng):
    rho = fock_oracle.random_density_matrix(2, rng, parity_even=True)
    assert np.trace(rho).real == pytest.approx(1.0)
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-14)
    assert np.all(np.linalg.eigvalsh(rho) > -1e-12)
    # odd-parity basis states 01 and 10
    assert abs(rho[1, 1]) < 1e-15 and abs(rho[2, 2]) < 1e-15


def test_partial_trace_of_product_state(rng):
    a = fock_oracle.random_density_matrix(1, rng)
    b = fock_oracle.random_density_matrix(1, rng)
    np.testing.assert_allclose(fock_oracle.partial_trace(np.kron(a, b), [0], 2), a, atol=1e-14)
    np.testing.assert_allclose(fock_oracle.partial_trace(np.kron(a, b), [1], 2), b, atol=1e-14)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("subsystem", [[0], [1], [0, 1]])
def test_register_replica_trace_matches_partial_trace(rng, n, subsystem):
    rho = fock_oracle.random_density_matrix(2, rng)
    replica, direct = fock_oracle.oracle_renyi_trace(rho, n, subsystem)
    assert replica == pytest.approx(direct, rel=1e-10)


def test_cyclic_permutation_operator_is_unitary():
    M = fock_oracle.cyclic_permutation_operator(3, 2)
    np.testing.assert_allclose(M @ M.conj().T, np.eye(M.shape[0]), atol=1e-12)
    np.testing.assert_allclose(fock_oracle.cyclic_permutation_operator(1, 4), np.eye(4), atol=1e-15)
    with pytest.raises(SizeCapExceeded):
        fock_oracle.cyclic_permutation_operator(4, 4)


@pytest.mark.parametrize("n, N", [(2, 1), (2, 2), (3, 2), (2, 3), (4, 2), (3, 3), (4, 3)])
def test_cyclic_permutation_conjugation(n, N):
    """M psi^alpha_i M^dag = sgn(alpha - beta) psi^beta_i with beta = alpha + 1 mod n."""
    M = fock_oracle.cyclic_permutation_operator(n, N)
    algebra = fock_oracle.build_majorana_ops(n * N + (n * N) % 2)
    for i in range(N):
        for alpha in range(n):
            beta = (alpha + 1) % n
            sign = -1.0 if alpha < n - 1 else 1.0
            np.testing.assert_allclose(
                M @ algebra.dense(alpha * N + i) @ M.conj().T, sign * algebra.dense(beta * N + i), atol=1e-10
            )


def test_fermionic_trace_single_replica_is_normalization(rng):
    rho = fock_oracle.random_density_matrix(1, rng, parity_even=True)
    assert fock_oracle.fermionic_replica_trace(rho, 1) == pytest.approx(1.0)


@pytest.mark.parametrize("n", [2, 3])
def test_epr_trace_equals_operator_trace(rng, n):
    """Test that the EPR contraction reproduces the plain trace with M_cyc."""
    rho = fock_oracle.random_density_matrix(1, rng, parity_even=True)
    assert fock_oracle.epr_replica_trace(rho, n) == pytest.approx(
        fock_oracle.fermionic_replica_trace(rho, n), rel=1e-9, abs=1e-12
    )
