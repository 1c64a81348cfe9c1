"""
Closed-form EPR transition amplitudes per permutation cycle.

Exponential growth is carried as a rate coefficient and never exponentiated
here; only growth-stripped factors are returned as numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from services.permutation_saddles import PermutationPair, canonical_cycle
from services.special_functions import chebyshev_T, momentum_values
from utils.exceptions import InvalidParameter

HALF_PI = math.pi / 2
_CRITICAL_TOLERANCE = 1e-15


@dataclass(frozen=True)
class MomentumGrid:
    length: int
    momenta: Tuple[float, ...]
    parity: str


@dataclass(frozen=True)
class CycleAmplitude:
    """Amplitude e^{growth_exponent * T} * stripped_value."""

    growth_exponent: float
    stripped_value: float


def _check_cycle(n_cycle: int) -> None:
    if n_cycle < 1:
        raise InvalidParameter(f"cycle length must be positive, got {n_cycle}", field="n_cycle")


def _check_theta(theta: float) -> None:
    if not 0.0 <= theta <= HALF_PI + _CRITICAL_TOLERANCE:
        raise InvalidParameter(f"theta must lie in [0, pi/2], got {theta}", field="theta")


def is_critical(theta: float) -> bool:
    """True at the replica-symmetric point theta = pi/2."""
    return abs(theta - HALF_PI) <= _CRITICAL_TOLERANCE


def momentum_grid(n_cycle: int) -> MomentumGrid:
    _check_cycle(n_cycle)
    parity = "odd" if n_cycle % 2 else "even"
    return MomentumGrid(length=n_cycle, momenta=tuple(momentum_values(n_cycle)), parity=parity)


def unitary_cycle_amplitude(n_cycle: int, lam: float, T: float) -> CycleAmplitude:
    """Late-time single-chain amplitude e^{n Lambda T / 2} 2^{1-n}."""
    _check_cycle(n_cycle)
    if lam < 0 or T < 0:
        raise InvalidParameter("lambda and T must be non-negative", field="lambda")
    return CycleAmplitude(growth_exponent=n_cycle * lam / 2.0, stripped_value=2.0 ** (1 - n_cycle))


def unitary_cycle_transient(n_cycle: int, lam_T: float) -> float:
    """
    Exact growth-stripped single-chain amplitude at finite Lambda * T.

    Each positive momentum contributes cos^2(k/2) + e^{-2 Lambda T} sin^2(k/2);
    the zero mode contributes 1. Tends to 2^{1-n} at late times.
    """
    _check_cycle(n_cycle)
    if lam_T < 0:
        raise InvalidParameter(f"Lambda * T must be non-negative, got {lam_T}", field="lambda")
    decay = math.exp(-2.0 * lam_T)
    positive = [k for k in momentum_values(n_cycle) if k > 0]
    return float(np.prod([math.cos(k / 2) ** 2 + decay * math.sin(k / 2) ** 2 for k in positive]))


def monitored_cycle_transient(n_cycle: int, theta: float, scale_T: float) -> float:
    """
    Exact growth-stripped two-chain amplitude of a cycle at finite E * T.

    Each momentum contributes w_k + (1 - w_k) e^{-2 E T} with
    w_k = (1 + cos theta cos k) / 2; the late-time value is
    monitored_cycle_factor.
    """
    _check_cycle(n_cycle)
    _check_theta(theta)
    if scale_T < 0:
        raise InvalidParameter(f"E * T must be non-negative, got {scale_T}", field="T")
    decay = math.exp(-2.0 * scale_T)
    weights = 0.5 * (1.0 + _cos_theta(theta) * np.cos(momentum_values(n_cycle)))
    return float(np.prod(weights + (1.0 - weights) * decay))


def _cos_theta(theta: float) -> float:
    return 0.0 if is_critical(theta) else math.cos(theta)


def cycle_log_factor(n_cycle: int, theta: float) -> Tuple[int, float]:
    """
    Monitored cycle factor as (power of two, log of the remaining mantissa).

    2^{1-2n} cos^n(theta) (T_n(sec theta) + 1), with theta = pi/2 as the
    exact product 2^{-n}.
    """
    _check_cycle(n_cycle)
    _check_theta(theta)
    if is_critical(theta):
        return -n_cycle, 0.0
    cos_t = math.cos(theta)
    mantissa = n_cycle * math.log(cos_t) + math.log(chebyshev_T(n_cycle, 1.0 / cos_t) + 1.0)
    return 1 - 2 * n_cycle, mantissa


def monitored_cycle_factor(n_cycle: int, theta: float) -> float:
    """Growth-stripped product of (1 + cos theta cos k) / 2 over the cycle momenta."""
    exponent, log_mantissa = cycle_log_factor(n_cycle, theta)
    return math.ldexp(math.exp(log_mantissa), exponent)


def direct_cycle_factor(n_cycle: int, theta: float) -> float:
    """The same factor as an explicit momentum product."""
    _check_theta(theta)
    cos_t = _cos_theta(theta)
    return float(np.prod(0.5 * (1.0 + cos_t * np.cos(momentum_values(n_cycle)))))


def pair_log_factor(pair: PermutationPair, theta: float) -> Tuple[int, float]:
    """Sum of cycle_log_factor over all n + 1 cycles of both pair members."""
    exponent = 0
    log_mantissa = 0.0
    for length in pair.cycle_lengths():
        e, m = cycle_log_factor(length, theta)
        exponent += e
        log_mantissa += m
    return exponent, log_mantissa


def pair_pfaffian_factor(pair: PermutationPair, theta: float) -> float:
    exponent, log_mantissa = pair_log_factor(pair, theta)
    return math.ldexp(math.exp(log_mantissa), exponent)


def coupled_growth_rate(n_replicas: int, scale: float) -> float:
    """Growth rate n sqrt(Lambda^2 + mu^2) of the coupled chains for n replicas."""
    return n_replicas * scale


def bdg_single_particle_matrix(n_cycle: int, lam: float, mu: float) -> np.ndarray:
    """
    Single-particle Majorana matrix of the coupled-chain cycle Hamiltonian.

    Basis (psi_L, chi_L, psi_R, chi_R), each block of size n_cycle, so that
    H = 1/2 gamma^T M gamma. M^2 = (Lambda^2 + mu^2) on the whole space.
    """
    _check_cycle(n_cycle)
    tau = canonical_cycle(n_cycle)
    zero = np.zeros((n_cycle, n_cycle))
    eye = np.eye(n_cycle)
    return np.block([
        [zero, -1j * lam * tau.T, 1j * mu * eye, zero],
        [1j * lam * tau, zero, zero, -1j * mu * eye],
        [-1j * mu * eye, zero, zero, -1j * lam * tau.T],
        [zero, 1j * mu * eye, 1j * lam * tau, zero],
    ])
