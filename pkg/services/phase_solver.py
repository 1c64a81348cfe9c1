"""
Self-consistent saddle amplitude Lambda(mu) and the phase diagram.

The self-consistency condition is solved in angle space: along the solution
curve mu(theta) = sin(theta) (J + U cos^{q-2} theta) is single valued, and
Lambda = mu / tan(theta).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import optimize

from config import ROOT_RTOL, THETA_GRID_POINTS
from services.model_core import ModelParams, validate
from utils.exceptions import InvalidParameter

LOGGER = logging.getLogger(__name__)

HALF_PI = math.pi / 2
_EDGE = 1e-15

VOLUME_LAW = "volume-law"
AREA_LAW = "area-law"
COEXISTENCE = "coexistence-window"


@dataclass(frozen=True)
class PhasePoint:
    mu: float
    lambdas: Tuple[float, ...]
    theta_branch: Tuple[float, ...]
    classification: str


@dataclass(frozen=True)
class TransitionClass:
    """Continuous or first-order transition of the volume-law branch."""

    kind: str
    mu_c: float
    window: Optional[Tuple[float, float]]
    tricritical_U: float


def _check(J: float, U: float, q: int, mu: float = 0.0) -> None:
    validate(ModelParams(J=J, U=U, q=q, mu=mu))


def mu_of_theta(theta: float, J: float, U: float, q: int) -> float:
    if not 0.0 <= theta <= HALF_PI + _EDGE:
        raise InvalidParameter(f"theta must lie in [0, pi/2], got {theta}", field="theta")
    return math.sin(theta) * (J + U * math.cos(theta) ** (q - 2))


def lambda_of_theta(theta: float, J: float, U: float, q: int) -> float:
    if not 0.0 <= theta <= HALF_PI + _EDGE:
        raise InvalidParameter(f"theta must lie in [0, pi/2], got {theta}", field="theta")
    if theta >= HALF_PI - _EDGE:
        return 0.0
    return math.cos(theta) * (J + U * math.cos(theta) ** (q - 2))


def _mu_derivative(theta: float, J: float, U: float, q: int) -> float:
    c = math.cos(theta)
    s = math.sin(theta)
    return c * (J + U * c ** (q - 2)) - U * (q - 2) * c ** (q - 3) * s * s


def phase_residual(lam: float, J: float, U: float, q: int, mu: float) -> float:
    """
    Lambda - (Lambda / E) (J + U (Lambda / E)^{q-2}) with E = sqrt(Lambda^2 + mu^2).

    Vanishes identically at Lambda = 0.
    """
    if lam == 0.0:
        return 0.0
    energy = math.hypot(lam, mu)
    ratio = lam / energy
    return lam - ratio * (J + U * ratio ** (q - 2))


def _theta_grid() -> np.ndarray:
    return HALF_PI * np.arange(1, THETA_GRID_POINTS + 1) / THETA_GRID_POINTS


def _classify_roots(lambdas: List[float]) -> str:
    if not lambdas:
        return AREA_LAW
    if len(lambdas) > 1:
        return COEXISTENCE
    return VOLUME_LAW


def solve_lambda(J: float, U: float, q: int, mu: float) -> PhasePoint:
    """
    All positive solutions Lambda at measurement rate mu.

    Roots of mu(theta) - mu are bracketed on a fixed angle grid and refined
    with Brent's method; the theta = pi/2 endpoint carries Lambda = 0 and is
    never reported.
    """
    _check(J, U, q, mu)
    if mu == 0.0:
        return PhasePoint(mu=0.0, lambdas=(J + U,), theta_branch=(0.0,), classification=VOLUME_LAW)

    def target(theta: float) -> float:
        return mu_of_theta(theta, J, U, q) - mu

    grid = np.concatenate([[0.0], _theta_grid()])
    values = np.array([target(theta) for theta in grid])
    thetas: List[float] = []
    for i in range(len(grid) - 1):
        left, right = values[i], values[i + 1]
        if right == 0.0:
            root = float(grid[i + 1])
        elif left * right < 0.0:
            root = optimize.brentq(target, grid[i], grid[i + 1], xtol=1e-15, rtol=ROOT_RTOL)
        else:
            continue
        if root < HALF_PI - _EDGE:
            thetas.append(root)

    lambdas = [lambda_of_theta(theta, J, U, q) for theta in thetas]
    scale = J + U
    for lam in lambdas:
        residual = phase_residual(lam, J, U, q, mu)
        if abs(residual) > 1e-10 * scale:
            LOGGER.warning("Phase residual %.3e at Lambda=%.6f, mu=%.6f", residual, lam, mu)
    return PhasePoint(
        mu=mu,
        lambdas=tuple(lambdas),
        theta_branch=tuple(thetas),
        classification=_classify_roots(lambdas),
    )


def perturbative_lambda(J: float, U: float, q: int, mu: float) -> float:
    """First order in U: J (1 - mu^2/J^2)^{1/2} + U (1 - mu^2/J^2)^{(q-3)/2}."""
    _check(J, U, q, mu)
    if mu >= J:
        raise InvalidParameter(f"perturbative solution needs mu < J, got mu={mu}, J={J}", field="mu")
    base = 1.0 - (mu / J) ** 2
    return J * math.sqrt(base) + U * base ** ((q - 3) / 2)


def tricritical_coupling(J: float, q: int) -> float:
    """
    Smallest U at which mu(theta) stops being monotone.

    d mu / d theta = cos(theta) [J + U g(cos theta)] with
    g(c) = (q-1) c^{q-2} - (q-2) c^{q-4}, whose minimum is -2 c*^{q-4}
    at c*^2 = (q-4)/(q-1).
    """
    _check(J, 0.0, q)
    c_squared = (q - 4) / (q - 1)
    return J / (2.0 * c_squared ** ((q - 4) / 2))


def classify_transition(J: float, U: float, q: int) -> TransitionClass:
    """Classify the transition from the shape of mu(theta) on (0, pi/2]."""
    _check(J, U, q)
    tricritical = tricritical_coupling(J, q)
    if math.isclose(U, tricritical, rel_tol=1e-12, abs_tol=1e-15):
        return TransitionClass(kind="tricritical", mu_c=J, window=None, tricritical_U=tricritical)

    grid = _theta_grid()[:-1]
    slopes = np.array([_mu_derivative(theta, J, U, q) for theta in grid])
    if np.all(slopes >= 0.0):
        return TransitionClass(kind="continuous", mu_c=J, window=None, tricritical_U=tricritical)

    # The first slope sign change marks the maximum of the volume-law branch
    turn = int(np.argmax(slopes < 0.0))
    theta_max = optimize.brentq(
        lambda theta: _mu_derivative(theta, J, U, q), grid[turn - 1], grid[turn], xtol=1e-15, rtol=ROOT_RTOL
    )
    mu_star = mu_of_theta(theta_max, J, U, q)
    tail = [mu_of_theta(theta, J, U, q) for theta in _theta_grid() if theta >= theta_max]
    lower = min(tail)
    LOGGER.info("First-order window [%.10f, %.10f] for J=%s U=%s q=%s", lower, mu_star, J, U, q)
    return TransitionClass(kind="first-order", mu_c=mu_star, window=(lower, mu_star), tricritical_U=tricritical)


def scan_phase_diagram(J: float, U: float, q: int, mus: Iterable[float]) -> pd.DataFrame:
    """
    Solve at every mu and lay the roots out as mu, lambda_1..k, theta_1..k, class.

    Rows with fewer roots are padded with NaN.
    """
    points = [solve_lambda(J, U, q, float(mu)) for mu in mus]
    width = max([len(point.lambdas) for point in points] + [1])
    rows = []
    for point in points:
        row = {"mu": point.mu}
        for k in range(width):
            row[f"lambda_{k + 1}"] = point.lambdas[k] if k < len(point.lambdas) else np.nan
        for k in range(width):
            row[f"theta_{k + 1}"] = point.theta_branch[k] if k < len(point.theta_branch) else np.nan
        row["class"] = point.classification
        rows.append(row)
    columns = ["mu"] + [f"lambda_{k + 1}" for k in range(width)] + [f"theta_{k + 1}" for k in range(width)] + ["class"]
    return pd.DataFrame(rows, columns=columns)
