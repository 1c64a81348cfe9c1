import math

import numpy as np
import pytest

from services import amplitudes
from services.permutation_saddles import enumerate_maximal_pairs
from utils.exceptions import InvalidParameter


def test_momentum_grid_parity():
    assert amplitudes.momentum_grid(3).parity == "odd"
    assert amplitudes.momentum_grid(4).parity == "even"
    assert len(amplitudes.momentum_grid(5).momenta) == 5


def test_unitary_amplitude_keeps_growth_symbolic():
    amplitude = amplitudes.unitary_cycle_amplitude(3, 0.5, 100.0)
    assert amplitude.growth_exponent == 0.75
    assert amplitude.stripped_value == 0.25


@pytest.mark.parametrize("n", range(1, 7))
def test_unitary_transient_limits(n):
    assert amplitudes.unitary_cycle_transient(n, 0.0) == pytest.approx(1.0)
    assert amplitudes.unitary_cycle_transient(n, 40.0) == pytest.approx(2.0 ** (1 - n), rel=1e-12)


def test_unitary_transient_two_replicas():
    lam_T = 0.7
    assert amplitudes.unitary_cycle_transient(2, lam_T) == pytest.approx((1 + math.exp(-2 * lam_T)) / 2)


@pytest.mark.parametrize("n", range(1, 6))
def test_monitored_transient_limits(n):
    theta = 0.9
    assert amplitudes.monitored_cycle_transient(n, theta, 0.0) == pytest.approx(1.0)
    assert amplitudes.monitored_cycle_transient(n, theta, 50.0) == pytest.approx(
        amplitudes.monitored_cycle_factor(n, theta), rel=1e-12
    )


def test_monitored_transient_single_site():
    theta, scale_T = 0.9, 0.4
    expected = math.cos(theta / 2) ** 2 + math.sin(theta / 2) ** 2 * math.exp(-0.8)
    assert amplitudes.monitored_cycle_transient(1, theta, scale_T) == pytest.approx(expected)
    with pytest.raises(InvalidParameter):
        amplitudes.monitored_cycle_transient(2, theta, -1.0)


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("theta", [0.0, 0.3, 1.0, 1.5, math.pi / 2])
def test_closed_form_factor_matches_momentum_product(n, theta):
    assert amplitudes.monitored_cycle_factor(n, theta) == pytest.approx(
        amplitudes.direct_cycle_factor(n, theta), rel=1e-12
    )


def test_critical_factor_is_exact_power_of_two():
    assert amplitudes.cycle_log_factor(5, math.pi / 2) == (-5, 0.0)
    assert amplitudes.monitored_cycle_factor(5, math.pi / 2) == 2.0 ** -5


def test_unmonitored_factor_is_one_for_single_cycle():
    assert amplitudes.monitored_cycle_factor(1, 0.0) == pytest.approx(1.0)


def test_theta_out_of_range():
    with pytest.raises(InvalidParameter):
        amplitudes.monitored_cycle_factor(2, -0.1)
    with pytest.raises(InvalidParameter):
        amplitudes.monitored_cycle_factor(2, 1.7)


def test_pair_factor_is_product_over_cycles():
    theta = 0.8
    for pair in enumerate_maximal_pairs(3):
        expected = math.prod(amplitudes.monitored_cycle_factor(n, theta) for n in pair.cycle_lengths())
        assert amplitudes.pair_pfaffian_factor(pair, theta) == pytest.approx(expected, rel=1e-12)


def test_coupled_growth_rate():
    assert amplitudes.coupled_growth_rate(3, 0.5) == 1.5


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bdg_matrix_squares_to_energy(n):
    lam, mu = 0.8, 0.6
    matrix = amplitudes.bdg_single_particle_matrix(n, lam, mu)
    np.testing.assert_allclose(matrix, matrix.conj().T, atol=1e-15)
    np.testing.assert_allclose(matrix, -matrix.T, atol=1e-15)
    np.testing.assert_allclose(matrix @ matrix, np.eye(4 * n), atol=1e-12)
