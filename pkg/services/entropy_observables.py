"""
Entropy observables assembled from the replica saddles.

Saddle sums run in log space: powers of two are kept as integer exponents
and only the remaining mantissas are logged, so the replica-symmetric point
theta = pi/2 produces an exactly vanishing extensive term.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import integrate
from scipy.special import logsumexp

from services.amplitudes import is_critical, pair_log_factor
from services.permutation_saddles import catalan, enumerate_maximal_pairs, make_pair, identity
from services.special_functions import chebyshev_T
from utils.exceptions import BranchCutError, EnumerationBoundExceeded, InvalidParameter

LOGGER = logging.getLogger(__name__)

LOG2 = math.log(2.0)
HALF_PI = math.pi / 2


@dataclass(frozen=True)
class SaddleTerm:
    """One maximal pair's contribution: log weight = (NL/2) log r."""

    tau_abar: Tuple[int, ...]
    cycle_lengths: Tuple[int, ...]
    two_exponent: int
    log_mantissa: float
    log_weight: float


@dataclass(frozen=True)
class EntropyResult:
    order: float
    value: float
    extensive: float
    subleading: float
    decomposition: Tuple[SaddleTerm, ...] = ()
    variants: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "order": self.order,
            "value": self.value,
            "extensive": self.extensive,
            "subleading": self.subleading,
            "variants": dict(self.variants),
            "saddles": [
                {
                    "tau_abar": [image + 1 for image in term.tau_abar],
                    "cycle_lengths": list(term.cycle_lengths),
                    "two_exponent": term.two_exponent,
                    "log_mantissa": term.log_mantissa,
                    "log_weight": term.log_weight,
                }
                for term in self.decomposition
            ],
        }


@dataclass(frozen=True)
class SpectrumDensity:
    N: int
    support: Tuple[float, float]
    density: Callable[[Union[float, np.ndarray]], Union[float, np.ndarray]]


def _check_theta(theta: float) -> None:
    if not 0.0 <= theta <= HALF_PI + 1e-15:
        raise InvalidParameter(f"theta must lie in [0, pi/2], got {theta}", field="theta")


def _check_flavors(N: int, minimum: int = 2) -> None:
    if N < minimum or N % 2:
        raise InvalidParameter(f"N must be even and >= {minimum}, got {N}", field="N")


# =============================================================================
# UNITARY CLUSTER
# =============================================================================

def cluster_renyi(n: int, N: int) -> EntropyResult:
    """
    Renyi entropy of half of a single unitary cluster.

    Each maximal pair contributes (2^{1-n})^N; with the parity degeneracy
    2^{2(n-1)} this gives (N - 2) log 2 + log C_n / (1 - n).
    """
    if n < 2:
        raise InvalidParameter(f"cluster_renyi needs n >= 2, got {n}", field="n")
    _check_flavors(N)

    saddle_log = N * (1 - n) * LOG2
    try:
        pairs = enumerate_maximal_pairs(n)
        terms = tuple(
            SaddleTerm(
                tau_abar=pair.tau_Abar.images,
                cycle_lengths=pair.cycle_lengths(),
                two_exponent=N * (1 - n),
                log_mantissa=0.0,
                log_weight=saddle_log,
            )
            for pair in pairs
        )
        log_count = math.log(len(pairs))
    except EnumerationBoundExceeded:
        LOGGER.info("Using the Catalan count for n=%s beyond the enumeration bound", n)
        terms = ()
        log_count = math.log(catalan(n))

    log_sum = 2 * (n - 1) * LOG2 + log_count + saddle_log
    value = log_sum / (1 - n)
    extensive = N * LOG2
    return EntropyResult(
        order=n,
        value=value,
        extensive=extensive,
        subleading=value - extensive,
        decomposition=terms,
    )


def catalan_continued(x: float) -> float:
    """C_x = (1 / 2 pi) int_0^4 t^{x-1} sqrt(t (4 - t)) dt for real x > -1/2."""
    if x <= -0.5:
        raise InvalidParameter(f"continued Catalan needs x > -1/2, got {x}", field="x")
    value, _ = integrate.quad(
        lambda t: 1.0 / (2.0 * math.pi), 0.0, 4.0, weight="alg", wvar=(x - 0.5, 0.5),
        epsabs=0.0, epsrel=1e-13,
    )
    return value


def catalan_log_derivative_at_one() -> float:
    """d/dx log C_x at x = 1, which equals 1/2."""
    value, _ = integrate.quad(
        lambda t: 1.0 / (2.0 * math.pi), 0.0, 4.0, weight="alg-loga", wvar=(0.5, 0.5),
        epsabs=0.0, epsrel=1e-13,
    )
    return value / catalan_continued(1.0)


def cluster_renyi_continued(x: float, N: int) -> float:
    """N log 2 - 2 log 2 + log C_x / (1 - x), with the x -> 1 limit taken analytically."""
    _check_flavors(N)
    if math.isclose(x, 1.0, rel_tol=0.0, abs_tol=1e-12):
        return (N - 2) * LOG2 - catalan_log_derivative_at_one()
    return (N - 2) * LOG2 + math.log(catalan_continued(x)) / (1.0 - x)


def cluster_vn_entropy(N: int) -> float:
    """Closed form N log 2 - 2 log 2 - 1/2."""
    _check_flavors(N)
    return N * LOG2 - 2 * LOG2 - 0.5


def half_chain_vn_entropy(N: int, L: int) -> float:
    """Unitary chain of L sites cut in half: NL/2 log 2 - L log 2 - 1/2."""
    _check_flavors(N)
    if L < 2 or L % 2:
        raise InvalidParameter(f"half-chain cut needs even L >= 2, got {L}", field="L")
    return N * L / 2 * LOG2 - L * LOG2 - 0.5


def page_entropy(dA: int, dB: int) -> float:
    """Average entanglement entropy of a random pure state on dA x dB."""
    if dA < 1 or dB < 1:
        raise InvalidParameter("dimensions must be positive", field="dA")
    dA, dB = min(dA, dB), max(dA, dB)
    harmonic = sum(1.0 / k for k in range(dB + 1, dA * dB + 1))
    return harmonic - (dA - 1) / (2.0 * dB)


# =============================================================================
# MONITORED CHAINS
# =============================================================================

def _log_cos_half_squared(theta: float) -> Tuple[int, float]:
    # cos^2(theta/2) = 2^{-1} (1 + cos theta)
    cos_t = 0.0 if is_critical(theta) else math.cos(theta)
    return -1, math.log1p(cos_t)


def _saddle_ratio(pair, theta: float, n: int) -> Tuple[int, float]:
    # pair factor / cos^{4n}(theta/2) as (power of two, log mantissa)
    exponent, log_mantissa = pair_log_factor(pair, theta)
    half_exponent, half_log = _log_cos_half_squared(theta)
    return exponent - 2 * n * half_exponent, log_mantissa - 2 * n * half_log


def quasi_entropy(n: int, theta: float, N: int, L: int) -> EntropyResult:
    """
    Quasi entropy S^{(n)} of the monitored chains with the cut in the middle.

    e^{(1-n) S} = 2^{L(n-1)} sum_pairs r_pair^{NL/2}, with r the per-site
    pair factor over cos^{4n}(theta/2). At theta = pi/2 all saddles coincide
    with the replica-symmetric one and S = 0.
    """
    if n < 2:
        raise InvalidParameter(f"quasi_entropy needs n >= 2, got {n}", field="n")
    _check_theta(theta)
    _check_flavors(N)
    if L < 1:
        raise InvalidParameter(f"L must be >= 1, got {L}", field="L")

    pairs = enumerate_maximal_pairs(n)
    power = N * L // 2

    if is_critical(theta):
        cyclic = make_pair(identity(n))
        exponent, log_mantissa = _saddle_ratio(cyclic, theta, n)
        term = SaddleTerm(cyclic.tau_Abar.images, cyclic.cycle_lengths(), exponent, log_mantissa, 0.0)
        return EntropyResult(
            order=n, value=0.0, extensive=0.0, subleading=0.0,
            decomposition=(term,),
            variants={"all_maximal_pairs": 0.0, "cyclic_only": 0.0},
        )

    terms: List[SaddleTerm] = []
    for pair in pairs:
        exponent, log_mantissa = _saddle_ratio(pair, theta, n)
        log_weight = (power * exponent) * LOG2 + power * log_mantissa
        terms.append(SaddleTerm(pair.tau_Abar.images, pair.cycle_lengths(), exponent, log_mantissa, log_weight))

    weights = np.array([term.log_weight for term in terms])
    degeneracy = L * (n - 1) * LOG2
    value = (degeneracy + logsumexp(weights)) / (1 - n)
    extensive = float(np.max(weights)) / (1 - n)

    cyclic_weight = next(term.log_weight for term in terms if term.tau_abar == tuple(range(n)))
    LOGGER.debug("quasi_entropy n=%s theta=%.6f: %s saddles", n, theta, len(terms))
    return EntropyResult(
        order=n,
        value=float(value),
        extensive=extensive,
        subleading=float(value) - extensive,
        decomposition=tuple(terms),
        variants={
            "all_maximal_pairs": float(value),
            "cyclic_only": (degeneracy + cyclic_weight) / (1 - n),
        },
    )


def continued_log_ratio(x: float, theta: float) -> float:
    """
    log r(x) of the cyclic saddle continued to real x.

    r(x) = cos^{2x}(theta/2) cos^x(theta) 2^{1-2x} (T_x(sec theta) + 1) / cos^{4x}(theta/2)
    """
    _check_theta(theta)
    if is_critical(theta):
        return 0.0
    cos_t = math.cos(theta)
    return (
        -2.0 * x * math.log(math.cos(theta / 2))
        + x * math.log(cos_t)
        + (1.0 - 2.0 * x) * LOG2
        + math.log(chebyshev_T(x, 1.0 / cos_t) + 1.0)
    )


def vn_entropy_density(theta: float) -> float:
    """
    Von Neumann entropy per site and flavor, sigma(theta).

    log[2(1 + sec theta)] - tan(theta/2) arccosh(sec theta), using
    log(sec - tan) = -arccosh(sec); sigma(pi/2) = 0.
    """
    _check_theta(theta)
    if is_critical(theta):
        return 0.0
    sec = 1.0 / math.cos(theta)
    return math.log(2.0 * (1.0 + sec)) - math.tan(theta / 2) * math.acosh(sec)


def vn_density_derivative(theta: float) -> float:
    """sigma(theta) as -d/dx log r(x) at x = 1, differentiated term by term."""
    _check_theta(theta)
    if is_critical(theta):
        return 0.0
    a = math.acosh(1.0 / math.cos(theta))
    slope = (
        -2.0 * math.log(math.cos(theta / 2))
        + math.log(math.cos(theta))
        - 2.0 * LOG2
        + a * math.sinh(a) / (math.cosh(a) + 1.0)
    )
    return -slope


def vn_density_finite_difference(theta: float, h: float = 1e-4) -> float:
    """sigma(theta) as a central difference of -log r(x) around x = 1."""
    return -(continued_log_ratio(1.0 + h, theta) - continued_log_ratio(1.0 - h, theta)) / (2.0 * h)


def near_critical_density(epsilon: float, printed: bool = False) -> float:
    """
    Leading behaviour of sigma at theta = pi/2 - epsilon.

    Returns epsilon (log 2e - log epsilon). printed=True returns
    (log epsilon - log 2e) epsilon, which has the opposite sign.
    """
    if not 0.0 < epsilon <= 0.3:
        raise InvalidParameter(f"epsilon must lie in (0, 0.3], got {epsilon}", field="epsilon")
    log_two_e = LOG2 + 1.0
    if printed:
        return (math.log(epsilon) - log_two_e) * epsilon
    return epsilon * (log_two_e - math.log(epsilon))


def unequal_cut_entropy(theta: float, N: int, L_A: int, L_Abar: int) -> float:
    """Extensive entropy sigma(theta) N min(L_A, L_Abar) of a cut into unequal parts."""
    if L_A < 0 or L_Abar < 0:
        raise InvalidParameter("cut lengths must be non-negative", field="L_A")
    return vn_entropy_density(theta) * N * min(L_A, L_Abar)


def entropy_table(thetas: Iterable[float], orders: Sequence[int], N: int, L: int) -> pd.DataFrame:
    """Rows of theta, sigma and S_n_k for the requested Renyi orders."""
    rows = []
    for theta in thetas:
        row = {"theta": float(theta), "sigma": vn_entropy_density(theta)}
        for n in orders:
            row[f"S_n_{n}"] = quasi_entropy(n, theta, N, L).value
        rows.append(row)
    columns = ["theta", "sigma"] + [f"S_n_{n}" for n in orders]
    return pd.DataFrame(rows, columns=columns)


# =============================================================================
# ENTANGLEMENT SPECTRUM
# =============================================================================

def _spectrum_edge(N: int) -> float:
    return 2.0 ** (4 - N)


def spectrum_density(N: int) -> SpectrumDensity:
    """D(lambda) = 2^{2N-5} / pi sqrt(lambda (2^{4-N} - lambda)) / lambda on (0, 2^{4-N})."""
    _check_flavors(N, minimum=4)
    edge = _spectrum_edge(N)
    prefactor = 2.0 ** (2 * N - 5) / math.pi

    def density(lam):
        lam = np.asarray(lam, dtype=float)
        inside = (lam > 0) & (lam < edge)
        safe = np.where(inside, lam, 0.5 * edge)
        values = np.where(inside, prefactor * np.sqrt(safe * (edge - safe)) / safe, 0.0)
        return float(values) if values.ndim == 0 else values

    return SpectrumDensity(N=N, support=(0.0, edge), density=density)


def spectrum_moment(N: int, k: int) -> float:
    """int lambda^k D(lambda) d lambda by quadrature with the endpoint singularities as weights."""
    _check_flavors(N, minimum=4)
    if k < 0:
        raise InvalidParameter(f"moment order must be >= 0, got {k}", field="k")
    edge = _spectrum_edge(N)
    # lambda = edge * x turns the integrand into x^k x^{-1/2} (1 - x)^{1/2}
    value, _ = integrate.quad(
        lambda x: x ** k, 0.0, 1.0, weight="alg", wvar=(-0.5, 0.5), epsabs=0.0, epsrel=1e-13,
    )
    return 2.0 ** (2 * N - 5) / math.pi * edge ** (k + 1) * value


def spectrum_moment_closed_form(N: int, k: int) -> float:
    """C_k 2^{(1-k)(N-2)}."""
    return catalan(k) * 2.0 ** ((1 - k) * (N - 2))


def resolvent_trace(lam: Union[float, complex], N: int) -> Union[float, complex]:
    """
    Tr 1/(lambda - rho_A) = 2^{2N-5} (1 - sqrt(1 - 2^{4-N}/lambda)).

    Complex arguments use the principal square root; real arguments on the
    cut [0, 2^{4-N}] need an explicit imaginary offset.
    """
    _check_flavors(N, minimum=4)
    edge = _spectrum_edge(N)
    prefactor = 2.0 ** (2 * N - 5)
    if isinstance(lam, complex) and lam.imag != 0.0:
        return prefactor * (1.0 - np.sqrt(1.0 - edge / lam))
    lam = float(np.real(lam))
    if 0.0 <= lam <= edge:
        raise BranchCutError(f"lambda={lam} lies on the cut [0, {edge}]; pass lambda +/- i delta")
    return prefactor * (1.0 - math.sqrt(1.0 - edge / lam))


def resolvent_discontinuity(lam: float, N: int, delta: float = 1e-8) -> float:
    """Density recovered from the jump of the resolvent across the cut."""
    below = resolvent_trace(complex(lam, -delta), N)
    above = resolvent_trace(complex(lam, delta), N)
    return float(np.real((below - above) / (2j * math.pi)))


def resolvent_series_coefficients(N: int, kmax: int, points: int = 64) -> np.ndarray:
    """
    Coefficients a_k of Tr R = sum_k a_k / lambda^{k+1}, k = 0..kmax.

    Extracted by the trapezoid rule on the circle |1/lambda| = 1 / (2 edge).
    """
    edge = _spectrum_edge(N)
    radius = 0.5 / edge
    phases = np.exp(2j * math.pi * np.arange(points) / points)
    w = radius * phases
    values = np.array([complex(resolvent_trace(complex(1.0 / wi), N)) for wi in w])
    coefficients = []
    for k in range(kmax + 1):
        coefficient = np.mean(values * phases ** (-(k + 1))) / radius ** (k + 1)
        coefficients.append(coefficient.real)
    return np.array(coefficients)
