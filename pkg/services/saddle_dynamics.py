"""
Equal-time saddle equations for two replicas.

The A-site Green's function is expanded as (x1, x2, z1) and the Abar-site one
as (y1, y2, w1). Both quadratic invariants x1^2 + x2^2 - z1^2 and
y1^2 + y2^2 - w1^2 are conserved by the flow.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from config import RK_STEP_FACTOR, SHOOTING_MAX_ITERATIONS, SHOOTING_PROBE_KINK_TIMES
from services.special_functions import jacobi_sn_cn_dn
from utils.exceptions import InvalidParameter, StepSizeViolation

LOGGER = logging.getLogger(__name__)

STATE_FIELDS = ("x1", "x2", "z1", "y1", "y2", "w1")
FIXED_POINT = (1.0, 0.0, 0.0)
ELLIPTIC_BRANCHES = ("sn2", "sn")

Triple = Tuple[float, float, float]


@dataclass(frozen=True)
class OdeState:
    x1: float
    x2: float
    z1: float
    y1: float = 0.0
    y2: float = -1.0
    w1: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.z1, self.y1, self.y2, self.w1], dtype=float)

    @classmethod
    def from_array(cls, values) -> "OdeState":
        return cls(*(float(v) for v in values))


@dataclass
class OdeTrajectory:
    times: np.ndarray
    states: np.ndarray

    def __len__(self) -> int:
        return len(self.times)

    def state(self, index: int) -> OdeState:
        return OdeState.from_array(self.states[index])

    def invariant_series(self) -> Tuple[np.ndarray, np.ndarray]:
        x1, x2, z1, y1, y2, w1 = self.states.T
        return x1 ** 2 + x2 ** 2 - z1 ** 2, y1 ** 2 + y2 ** 2 - w1 ** 2

    def max_drift(self) -> float:
        inv_a, inv_abar = self.invariant_series()
        return float(max(np.max(np.abs(inv_a - inv_a[0])), np.max(np.abs(inv_abar - inv_abar[0]))))

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.states, columns=list(STATE_FIELDS))
        frame.insert(0, "t", self.times)
        inv_a, inv_abar = self.invariant_series()
        frame["invariant_A"] = inv_a
        frame["invariant_Abar"] = inv_abar
        return frame


@dataclass(frozen=True)
class ShootingResult:
    x1_0: float
    iterations: int
    probe_time: float
    trajectory: OdeTrajectory
    approach_time: float
    approach_distance: float


def _derivative(values: np.ndarray, J: float, U: float) -> np.ndarray:
    x1, x2, z1, y1, y2, w1 = values
    return np.array([
        4 * J * x2 * z1 + 2 * U * x2 * z1 * (y1 ** 2 + w1 ** 2),
        -4 * J * x1 * z1 - 2 * U * x1 * z1 * (y2 ** 2 + w1 ** 2),
        2 * U * x1 * x2 * (y1 ** 2 - y2 ** 2),
        4 * J * y2 * w1 + 2 * U * y2 * w1 * (x1 ** 2 + z1 ** 2),
        -4 * J * y1 * w1 - 2 * U * y1 * w1 * (x2 ** 2 + z1 ** 2),
        2 * U * y1 * y2 * (x1 ** 2 - x2 ** 2),
    ])


def ode_rhs(state: OdeState, J: float, U: float) -> OdeState:
    """Time derivative of all six coefficients."""
    return OdeState.from_array(_derivative(state.as_array(), J, U))


def invariants(state: OdeState) -> Tuple[float, float]:
    return (
        state.x1 ** 2 + state.x2 ** 2 - state.z1 ** 2,
        state.y1 ** 2 + state.y2 ** 2 - state.w1 ** 2,
    )


def _kink_rate(J: float, U: float) -> float:
    return math.sqrt(U * (2 * J + U))


def max_step(J: float, U: float) -> float:
    """Largest allowed step RK_STEP_FACTOR / sqrt(U (2J + U)); J sets the scale when U = 0."""
    rate = _kink_rate(J, U) if U > 0 else J
    if rate <= 0:
        raise InvalidParameter("J + U must be positive", field="J")
    return RK_STEP_FACTOR / rate


def _rk4_step(values: np.ndarray, h: float, J: float, U: float) -> np.ndarray:
    k1 = _derivative(values, J, U)
    k2 = _derivative(values + 0.5 * h * k1, J, U)
    k3 = _derivative(values + 0.5 * h * k2, J, U)
    k4 = _derivative(values + h * k3, J, U)
    return values + h * (k1 + 2 * (k2 + k3) + k4) / 6


def integrate(state0: OdeState, J: float, U: float, T: float, dt: float) -> OdeTrajectory:
    """
    Classical fourth-order Runge-Kutta with a fixed step.

    T is split into ceil(T / dt) equal steps, so the step used never exceeds dt.
    """
    if T < 0:
        raise InvalidParameter(f"T must be >= 0, got {T}", field="T")
    if dt <= 0:
        raise InvalidParameter(f"dt must be positive, got {dt}", field="dt")
    limit = max_step(J, U)
    if dt > limit * (1 + 1e-12):
        raise StepSizeViolation(f"dt={dt} exceeds the stable step {limit:.6g} for J={J}, U={U}")

    steps = max(int(math.ceil(T / dt - 1e-9)), 1) if T > 0 else 0
    h = T / steps if steps else 0.0
    states = np.empty((steps + 1, len(STATE_FIELDS)))
    states[0] = state0.as_array()
    for i in range(steps):
        states[i + 1] = _rk4_step(states[i], h, J, U)
    times = np.linspace(0.0, T, steps + 1)
    LOGGER.debug("Integrated %s steps of h=%.3g up to T=%s", steps, h, T)
    return OdeTrajectory(times=times, states=states)


# =============================================================================
# CLOSED FORMS
# =============================================================================

def shift_t0(J: float, U: float) -> float:
    """t0 = arccosh((J + U) / J) / (4 sqrt(U (2J + U))), which puts x2(0) = -1."""
    if J <= 0:
        raise InvalidParameter(f"J must be positive, got {J}", field="J")
    if U <= 0:
        raise InvalidParameter("U = 0 has no kink time scale", field="U")
    return math.acosh((J + U) / J) / (4.0 * _kink_rate(J, U))


def hyperbolic_solution(t: float, J: float, U: float) -> Triple:
    """Long-time solution with c1 = c2 = 1 in the reduced sector."""
    if t < 0:
        raise InvalidParameter(f"t must be >= 0, got {t}", field="t")
    u = 2.0 * _kink_rate(J, U) * (t - shift_t0(J, U))
    sech = 1.0 / math.cosh(u)
    return (
        math.tanh(u),
        -math.sqrt((2 * J + U) / (2 * J)) * sech,
        -math.sqrt(U / (2 * J)) * sech,
    )


def elliptic_parameter(c1: float, c2: float) -> float:
    return c1 / c2


def elliptic_invariant(J: float, U: float, c1: float, c2: float) -> float:
    """x1^2 + x2^2 - z1^2 = c1 + U (c1 - c2) / (2J)."""
    return c1 + U * (c1 - c2) / (2 * J)


def _check_constants(c1: float, c2: float) -> None:
    if not 0.0 < c1 <= 1.0:
        raise InvalidParameter(f"c1 must lie in (0, 1], got {c1}", field="c1")
    if not 0.0 < c2 <= 1.0:
        raise InvalidParameter(f"c2 must lie in (0, 1], got {c2}", field="c2")


def elliptic_solution(
    t: float,
    J: float,
    U: float,
    c1: float,
    c2: float,
    t0: Optional[float] = None,
    branch: str = "sn2",
) -> Triple:
    """
    Finite-time solution in Jacobi elliptic functions.

    With u = 2 sqrt(U (2J + U) c2) (t - t0) and m = c1 / c2:
    x1 = sqrt(c1) sn, x2 = -sqrt((2J + U) c1 / 2J) (1 - sn^2)^{1/2}, z1 = -sqrt(U c2 / 2J) dn.
    The "sn2" branch uses cn for (1 - sn^2)^{1/2}, which keeps its sign through
    the zeros of cn; the "sn" branch is the (1 - sn)^{1/2} variant.
    m > 1 (c1 > c2) goes through the reciprocal-parameter transform.
    """
    _check_constants(c1, c2)
    if branch not in ELLIPTIC_BRANCHES:
        raise InvalidParameter(f"branch must be one of {ELLIPTIC_BRANCHES}, got {branch!r}", field="branch")
    if t0 is None:
        t0 = shift_t0(J, U)
    u = 2.0 * math.sqrt(U * (2 * J + U) * c2) * (t - t0)
    sn, cn, dn = jacobi_sn_cn_dn(u, elliptic_parameter(c1, c2))
    amplitude = math.sqrt((2 * J + U) * c1 / (2 * J))
    if branch == "sn2":
        x2 = -amplitude * cn
    else:
        x2 = -amplitude * math.sqrt(max(1.0 - sn, 0.0))
    return math.sqrt(c1) * sn, x2, -math.sqrt(U * c2 / (2 * J)) * dn


def _reduced_rhs(solution: Triple, J: float, U: float) -> np.ndarray:
    return _derivative(np.array([*solution, 0.0, -1.0, 0.0]), J, U)[:3]


def solution_residual(
    solution: Callable[[float], Triple], times, J: float, U: float, h: float = 1e-6
) -> float:
    """Largest |d/dt solution - rhs| over the given times, by central differences."""
    worst = 0.0
    for t in times:
        forward = np.array(solution(t + h))
        backward = np.array(solution(t - h))
        slope = (forward - backward) / (2 * h)
        worst = max(worst, float(np.max(np.abs(slope - _reduced_rhs(solution(t), J, U)))))
    return worst


def select_elliptic_branch(J: float, U: float, c1: float, c2: float, times) -> Tuple[str, Dict[str, float]]:
    """Pick the elliptic x2 branch whose residual along the flow is smallest."""
    t0 = shift_t0(J, U)
    residuals = {
        branch: solution_residual(
            lambda t, b=branch: elliptic_solution(t, J, U, c1, c2, t0=t0, branch=b), times, J, U
        )
        for branch in ELLIPTIC_BRANCHES
    }
    best = min(residuals, key=residuals.get)
    LOGGER.info("Elliptic branch residuals %s; using %s", residuals, best)
    return best, residuals


def sign_flipped(solution: Triple, flip: Tuple[int, int]) -> Triple:
    """Negate two of (x1, x2, z1); the flow is invariant under this."""
    i, j = flip
    if i == j or not {i, j} <= {0, 1, 2}:
        raise InvalidParameter(f"flip must name two distinct components of (x1, x2, z1), got {flip}", field="flip")
    values = list(solution)
    values[i] = -values[i]
    values[j] = -values[j]
    return tuple(values)


def sign_related_solutions(solution: Triple) -> List[Triple]:
    """The solution itself and its three two-component sign flips."""
    return [tuple(solution)] + [sign_flipped(solution, flip) for flip in ((0, 1), (0, 2), (1, 2))]


# =============================================================================
# SHOOTING
# =============================================================================

def reduced_initial_state(x1_0: float) -> OdeState:
    """x2(0) = -1 with x1(0) = z1(0) = x1_0, so x1^2 + x2^2 - z1^2 = 1; Abar frozen at y2 = -1."""
    return OdeState(x1=x1_0, x2=-1.0, z1=x1_0, y1=0.0, y2=-1.0, w1=0.0)


def closest_approach(trajectory: OdeTrajectory, target: Triple = FIXED_POINT) -> Tuple[float, float]:
    """(time, distance) of the A-site point nearest to target."""
    distance = np.linalg.norm(trajectory.states[:, :3] - np.array(target), axis=1)
    index = int(np.argmin(distance))
    return float(trajectory.times[index]), float(distance[index])


def _unstable_component(state: np.ndarray, J: float, U: float) -> float:
    # Linearized around (1, 0, 0) the stable direction is z1 = sqrt(U / (2J + U)) x2
    return state[1] - math.sqrt((2 * J + U) / U) * state[2]


def shoot_plateau(J: float, U: float, dt: Optional[float] = None) -> ShootingResult:
    """
    Secant shooting on x1(0) = z1(0) onto the stable manifold of (1, 0, 0).

    The unstable component is zeroed at t0 + SHOOTING_PROBE_KINK_TIMES / b,
    b = 2 sqrt(U (2J + U)), starting from the hyperbolic value
    -sqrt(U / (2J + U)).
    """
    t0 = shift_t0(J, U)
    rate = 2.0 * _kink_rate(J, U)
    probe_time = t0 + SHOOTING_PROBE_KINK_TIMES / rate
    step = dt if dt is not None else min(1e-3, max_step(J, U))

    def miss(x1_0: float) -> Tuple[float, OdeTrajectory]:
        trajectory = integrate(reduced_initial_state(x1_0), J, U, probe_time, step)
        return _unstable_component(trajectory.states[-1], J, U), trajectory

    guess = -math.sqrt(U / (2 * J + U))
    previous = guess * (1.0 + 1e-10)
    miss_previous, _ = miss(previous)
    miss_current, trajectory = miss(guess)
    iterations = 0
    while iterations < SHOOTING_MAX_ITERATIONS and abs(miss_current) > 1e-12:
        if miss_current == miss_previous:
            break
        update = guess - miss_current * (guess - previous) / (miss_current - miss_previous)
        previous, miss_previous = guess, miss_current
        guess = update
        miss_current, trajectory = miss(guess)
        iterations += 1
        LOGGER.debug("Shooting iteration %s: x1(0)=%.16f miss=%.3e", iterations, guess, miss_current)

    approach_time, approach_distance = closest_approach(trajectory)
    return ShootingResult(
        x1_0=guess,
        iterations=iterations,
        probe_time=probe_time,
        trajectory=trajectory,
        approach_time=approach_time,
        approach_distance=approach_distance,
    )
