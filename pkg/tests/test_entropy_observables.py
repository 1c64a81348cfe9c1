import math

import numpy as np
import pytest

from services import entropy_observables as eo
from services.permutation_saddles import catalan
from utils.exceptions import BranchCutError, InvalidParameter

LOG2 = math.log(2.0)


# =============================================================================
# UNITARY CLUSTER
# =============================================================================

@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cluster_renyi_closed_form(n):
    N = 8
    result = eo.cluster_renyi(n, N)
    expected = (N - 2) * LOG2 + math.log(catalan(n)) / (1 - n)
    assert result.value == pytest.approx(expected, rel=1e-12)
    assert result.extensive == N * LOG2
    assert result.subleading == pytest.approx(-2 * LOG2 + math.log(catalan(n)) / (1 - n))
    assert len(result.decomposition) == catalan(n)


def test_cluster_renyi_two_replicas():
    assert eo.cluster_renyi(2, 6).value == pytest.approx(3 * LOG2)


def test_cluster_renyi_beyond_enumeration_uses_catalan_count():
    result = eo.cluster_renyi(9, 10)
    assert result.decomposition == ()
    assert result.value == pytest.approx(8 * LOG2 - math.log(4862) / 8)


def test_cluster_renyi_checks():
    with pytest.raises(InvalidParameter):
        eo.cluster_renyi(1, 4)
    with pytest.raises(InvalidParameter):
        eo.cluster_renyi(2, 5)


@pytest.mark.parametrize("x", [0, 1, 2, 3, 4, 5])
def test_continued_catalan_hits_integers(x):
    assert eo.catalan_continued(x) == pytest.approx(catalan(x), rel=1e-10)


def test_continued_catalan_log_derivative():
    assert eo.catalan_log_derivative_at_one() == pytest.approx(0.5, rel=1e-8)


def test_cluster_continuation_limits():
    N = 6
    assert eo.cluster_renyi_continued(1.0, N) == pytest.approx(eo.cluster_vn_entropy(N), rel=1e-8)
    assert eo.cluster_renyi_continued(3.0, N) == pytest.approx(eo.cluster_renyi(3, N).value, rel=1e-10)
    # continuous through x = 1
    assert eo.cluster_renyi_continued(1.0 + 1e-5, N) == pytest.approx(eo.cluster_vn_entropy(N), abs=1e-4)


def test_cluster_vn_and_half_chain():
    assert eo.cluster_vn_entropy(4) == pytest.approx(2 * LOG2 - 0.5)
    assert eo.half_chain_vn_entropy(4, 2) == pytest.approx(2 * LOG2 - 0.5)
    with pytest.raises(InvalidParameter):
        eo.half_chain_vn_entropy(4, 3)


def test_page_entropy():
    assert eo.page_entropy(4, 4) == pytest.approx(0.9223958333333333, rel=1e-10)
    assert eo.page_entropy(1, 7) == 0.0
    assert eo.page_entropy(2, 8) == eo.page_entropy(8, 2)


# =============================================================================
# MONITORED CHAINS
# =============================================================================

def test_quasi_entropy_vanishes_at_replica_symmetric_point(half_pi):
    result = eo.quasi_entropy(3, half_pi, 8, 2)
    assert result.value == 0.0
    assert result.extensive == 0.0
    assert result.subleading == 0.0
    assert result.variants == {"all_maximal_pairs": 0.0, "cyclic_only": 0.0}


@pytest.mark.parametrize("n", [2, 3])
def test_quasi_entropy_unmonitored_limit(n):
    """Test theta = 0, where every maximal pair has ratio 2^{2-2n}."""
    N, L = 4, 2
    result = eo.quasi_entropy(n, 0.0, N, L)
    expected = N * L * LOG2 - L * LOG2 + math.log(catalan(n)) / (1 - n)
    assert result.value == pytest.approx(expected, rel=1e-12)
    assert result.extensive == pytest.approx(N * L * LOG2, rel=1e-12)
    weights = {term.log_weight for term in result.decomposition}
    assert max(weights) - min(weights) < 1e-12


def test_quasi_entropy_extensive_term_is_non_negative(interior_thetas):
    for theta in interior_thetas:
        for n in (2, 3, 4):
            result = eo.quasi_entropy(n, theta, 6, 2)
            assert result.extensive >= 0.0, f"negative extensive term at theta={theta}, n={n}"


def test_quasi_entropy_positive_at_moderate_angle():
    result = eo.quasi_entropy(2, 1.2, 10, 2)
    assert result.value > 0.0
    assert result.value == pytest.approx(result.extensive + result.subleading)


def test_quasi_entropy_variants_are_ordered(interior_thetas):
    """Test that adding saddles can only lower S^{(n)} below the cyclic-only value."""
    for theta in interior_thetas:
        result = eo.quasi_entropy(3, theta, 4, 2)
        assert result.variants["all_maximal_pairs"] <= result.variants["cyclic_only"] + 1e-12
        assert len(result.decomposition) == catalan(3)


def test_quasi_entropy_to_dict_is_one_based():
    payload = eo.quasi_entropy(2, 0.5, 4, 2).to_dict()
    assert [saddle["tau_abar"] for saddle in payload["saddles"]] == [[1, 2], [2, 1]]
    assert payload["order"] == 2


def test_quasi_entropy_checks():
    with pytest.raises(InvalidParameter):
        eo.quasi_entropy(1, 0.5, 4, 2)
    with pytest.raises(InvalidParameter):
        eo.quasi_entropy(2, 2.0, 4, 2)
    with pytest.raises(InvalidParameter):
        eo.quasi_entropy(2, 0.5, 4, 0)


def test_vn_density_endpoints(half_pi):
    assert eo.vn_entropy_density(0.0) == pytest.approx(2 * LOG2, rel=1e-12)
    assert eo.vn_entropy_density(half_pi) == 0.0


def test_vn_density_three_routes_agree(interior_thetas):
    for theta in interior_thetas:
        sigma = eo.vn_entropy_density(theta)
        assert eo.vn_density_derivative(theta) == pytest.approx(sigma, rel=1e-10)
        assert eo.vn_density_finite_difference(theta) == pytest.approx(sigma, rel=1e-6)


def test_vn_density_decreases_with_theta():
    thetas = np.linspace(0.0, math.pi / 2, 40)
    sigmas = [eo.vn_entropy_density(theta) for theta in thetas]
    assert all(a > b for a, b in zip(sigmas, sigmas[1:]))


def test_near_critical_asymptote(half_pi):
    epsilon = 1e-3
    assert eo.vn_entropy_density(half_pi - epsilon) == pytest.approx(eo.near_critical_density(epsilon), rel=1e-2)
    assert eo.near_critical_density(epsilon, printed=True) == pytest.approx(-eo.near_critical_density(epsilon))
    with pytest.raises(InvalidParameter):
        eo.near_critical_density(0.0)


def test_unequal_cut_uses_shorter_side():
    theta = 0.7
    assert eo.unequal_cut_entropy(theta, 4, 3, 5) == pytest.approx(eo.vn_entropy_density(theta) * 12)
    assert eo.unequal_cut_entropy(theta, 4, 5, 3) == eo.unequal_cut_entropy(theta, 4, 3, 5)


def test_entropy_table_columns():
    table = eo.entropy_table([0.2, 0.9], [2, 3], 4, 2)
    assert list(table.columns) == ["theta", "sigma", "S_n_2", "S_n_3"]
    assert len(table) == 2
    assert table.loc[1, "S_n_2"] == pytest.approx(eo.quasi_entropy(2, 0.9, 4, 2).value)


# =============================================================================
# ENTANGLEMENT SPECTRUM
# =============================================================================

def test_spectrum_density_shape():
    spectrum = eo.spectrum_density(6)
    edge = spectrum.support[1]
    assert edge == 0.25
    assert spectrum.density(edge / 2) == pytest.approx(2.0 ** 7 / math.pi)
    assert spectrum.density(-0.1) == 0.0
    assert spectrum.density(2 * edge) == 0.0
    values = spectrum.density(np.array([0.05, 0.1, 0.3]))
    assert values.shape == (3,) and values[2] == 0.0


@pytest.mark.parametrize("N", [6, 8, 10])
@pytest.mark.parametrize("k", range(6))
def test_spectrum_moments_are_catalan(N, k):
    assert eo.spectrum_moment(N, k) == pytest.approx(eo.spectrum_moment_closed_form(N, k), rel=1e-9)


def test_spectrum_normalization_counts_states():
    # zeroth moment is the number of non-zero Schmidt values, 2^{N-2}
    assert eo.spectrum_moment(8, 0) == pytest.approx(64.0, rel=1e-10)
    # first moment is the trace of rho_A
    assert eo.spectrum_moment(8, 1) == pytest.approx(1.0, rel=1e-10)


def test_resolvent_on_cut_needs_branch():
    with pytest.raises(BranchCutError):
        eo.resolvent_trace(0.01, 8)
    with pytest.raises(InvalidParameter):
        eo.resolvent_trace(1.0, 2)


def test_resolvent_large_lambda():
    N, lam = 8, 1e4
    assert eo.resolvent_trace(lam, N) == pytest.approx(2.0 ** (N - 2) / lam, rel=1e-3)


def test_resolvent_discontinuity_recovers_density():
    N = 8
    spectrum = eo.spectrum_density(N)
    for fraction in (0.1, 0.5, 0.9):
        lam = fraction * spectrum.support[1]
        assert eo.resolvent_discontinuity(lam, N) == pytest.approx(spectrum.density(lam), rel=1e-5)


def test_resolvent_series_matches_moments():
    N = 6
    coefficients = eo.resolvent_series_coefficients(N, 5)
    expected = [eo.spectrum_moment_closed_form(N, k) for k in range(6)]
    np.testing.assert_allclose(coefficients, expected, rtol=1e-9)
