"""
Oracle cross-check suites run by the `verify` command.

Each suite compares a closed form against an independent route (brute-force
Fock space, exhaustive enumeration, quadrature, direct integration) and
reports one CheckResult per comparison.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np
from scipy import special

from services import (
    amplitudes,
    entropy_observables,
    fock_oracle,
    permutation_saddles,
    phase_solver,
    saddle_dynamics,
    special_functions,
    trajectory_sim,
)
from services.model_core import ModelParams
from utils.exceptions import VerificationFailure

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for check in self.checks if check.passed)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    def record(self, name: str, actual: float, expected: float, rtol: float = 0.0, atol: float = 0.0) -> None:
        ok = bool(np.isclose(actual, expected, rtol=rtol, atol=atol))
        self.checks.append(CheckResult(name, ok, f"actual={actual!r} expected={expected!r}"))

    def require(self, name: str, condition: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, bool(condition), detail))

    def to_dict(self) -> Dict[str, object]:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "failed": self.failed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def _permutations() -> SuiteReport:
    report = SuiteReport("permutations")
    for n in range(1, 8):
        pairs = permutation_saddles.enumerate_maximal_pairs(n)
        report.record(f"catalan count n={n}", len(pairs), permutation_saddles.catalan(n))
        report.require(
            f"cyclic pair is maximal n={n}",
            any(pair.tau_Abar.images == tuple(range(n)) for pair in pairs),
        )
    return report


def _special() -> SuiteReport:
    report = SuiteReport("special")
    for n in range(0, 8):
        for z in (-0.7, 0.1, 0.45):
            report.record(
                f"2F1 terminating n={n} z={z}",
                special_functions.hyp2f1_spectral(n, z),
                special_functions.hyp2f1_terminating(n, z),
                rtol=1e-10, atol=1e-12,
            )
    for x in (0.5, 1.5, 2.3):
        report.record(f"2F1 real order x={x}", special_functions.hyp2f1_spectral(x, -0.3),
                      float(special.hyp2f1(x, -x, 0.5, -0.3)), rtol=1e-10)
    for m in (0.0, 0.3, 0.9, 0.999):
        for u in (0.2, 1.7, -2.5):
            sn, cn, dn = special_functions.jacobi_sn_cn_dn(u, m)
            ref = special.ellipj(u, m)
            report.require(f"ellipj u={u} m={m}", np.allclose((sn, cn, dn), ref[:3], atol=1e-12))
    for n in range(1, 21):
        for a in (1.0, 1.5, 2.0, 5.0):
            lhs, rhs = special_functions.trig_product_identity(n, a)
            report.record(f"momentum product n={n} a={a}", lhs, rhs, rtol=1e-9)
    rng = np.random.default_rng(7)
    block = rng.standard_normal((6, 6))
    skew = block - block.T
    report.record("pfaffian squared is determinant", special_functions.pfaffian(skew) ** 2,
                  float(np.linalg.det(skew)), rtol=1e-9)
    return report


def _amplitudes() -> SuiteReport:
    report = SuiteReport("amplitudes")
    for n in range(1, 6):
        for theta in (0.0, 0.7, math.pi / 2):
            report.record(
                f"cycle factor n={n} theta={theta:.3f}",
                amplitudes.monitored_cycle_factor(n, theta),
                amplitudes.direct_cycle_factor(n, theta),
                rtol=1e-12,
            )
        report.record(f"late transient n={n}", amplitudes.unitary_cycle_transient(n, 40.0),
                      2.0 ** (1 - n), rtol=1e-12)
    for n in range(2, 5):
        lam, mu = 0.8, 0.6
        matrix = amplitudes.bdg_single_particle_matrix(n, lam, mu)
        report.require(f"BdG square n={n}",
                       np.allclose(matrix @ matrix, (lam ** 2 + mu ** 2) * np.eye(4 * n), atol=1e-12))
    return report


def _conjugation_holds(n: int, N: int) -> bool:
    # M psi^alpha_i M^dag = sgn(alpha - beta) psi^beta_i, beta = alpha + 1 mod n
    M = fock_oracle.cyclic_permutation_operator(n, N)
    modes = n * N
    algebra = fock_oracle.build_majorana_ops(modes + modes % 2)
    for i in range(N):
        for alpha in range(n):
            beta = (alpha + 1) % n
            image = M @ algebra.dense(alpha * N + i) @ M.conj().T
            if not np.allclose(image, np.sign(alpha - beta) * algebra.dense(beta * N + i), atol=1e-10):
                return False
    return True


def _fock() -> SuiteReport:
    report = SuiteReport("fock")
    for n in range(1, 5):
        for T in (0.0, 0.5, 2.0):
            report.record(
                f"single chain n={n} T={T}",
                fock_oracle.oracle_pair_amplitude((n,), 0.0, 1.0, T, chains=1, strip=n / 2.0),
                amplitudes.unitary_cycle_transient(n, T),
                rtol=1e-8, atol=1e-12,
            )
    for n in range(1, 6):
        for theta in (0.0, 0.3, math.pi / 4, 1.2, math.pi / 2):
            for T in (0.5, 1.0, 2.0):
                report.record(
                    f"two chains n={n} theta={theta:.3f} T={T}",
                    fock_oracle.oracle_pair_amplitude(
                        (n,), theta, 1.0, T, chains=2, strip=amplitudes.coupled_growth_rate(n, 1.0)
                    ),
                    amplitudes.monitored_cycle_transient(n, theta, T),
                    rtol=1e-9,
                )
    for n, N in ((2, 2), (3, 2), (4, 3)):
        report.require(f"cyclic conjugation n={n} N={N}", _conjugation_holds(n, N))
    rng = np.random.default_rng(11)
    rho = fock_oracle.random_density_matrix(2, rng)
    replica, direct = fock_oracle.oracle_renyi_trace(rho, 2, subsystem=[0, 1])
    report.record("register replica trace", replica, direct, rtol=1e-10)
    return report


def _entropy() -> SuiteReport:
    report = SuiteReport("entropy")
    report.record("sigma(0)", entropy_observables.vn_entropy_density(0.0), 2 * math.log(2), rtol=1e-12)
    report.record("sigma(pi/2)", entropy_observables.vn_entropy_density(math.pi / 2), 0.0, atol=1e-15)
    for theta in (0.3, 0.9, 1.4):
        sigma = entropy_observables.vn_entropy_density(theta)
        report.record(f"derivative route theta={theta}", entropy_observables.vn_density_derivative(theta),
                      sigma, rtol=1e-10)
        report.record(f"finite difference theta={theta}",
                      entropy_observables.vn_density_finite_difference(theta), sigma, rtol=1e-6)
    report.record("catalan derivative", entropy_observables.catalan_log_derivative_at_one(), 0.5, rtol=1e-8)
    for k in range(0, 6):
        report.record(f"spectrum moment k={k}", entropy_observables.spectrum_moment(8, k),
                      entropy_observables.spectrum_moment_closed_form(8, k), rtol=1e-9)
    report.record("page(4,4)", entropy_observables.page_entropy(4, 4), 0.9223958333333333, rtol=1e-10)
    return report


def _phase() -> SuiteReport:
    report = SuiteReport("phase")
    point = phase_solver.solve_lambda(1.0, 0.0, 4, 0.6)
    report.record("U=0 root", point.lambdas[0], 0.8, rtol=1e-10)
    for theta in (0.2, 0.8, 1.3):
        mu = phase_solver.mu_of_theta(theta, 1.0, 0.3, 4)
        solved = phase_solver.solve_lambda(1.0, 0.3, 4, mu)
        report.record(f"round trip theta={theta}", solved.lambdas[0],
                      phase_solver.lambda_of_theta(theta, 1.0, 0.3, 4), rtol=1e-10)
    transition = phase_solver.classify_transition(1.0, 1.0, 4)
    report.record("spinodal maximum", transition.mu_c, 4 * math.sqrt(6) / 9, rtol=1e-10)
    report.require("U=0.1 continuous", phase_solver.classify_transition(1.0, 0.1, 4).kind == "continuous")
    return report


def _dynamics() -> SuiteReport:
    report = SuiteReport("dynamics")
    J, U = 1.0, 0.4
    report.record("t0", saddle_dynamics.shift_t0(J, U), math.acosh(1.4) / (4 * math.sqrt(0.96)), rtol=1e-12)
    x1, x2, z1 = saddle_dynamics.hyperbolic_solution(0.0, J, U)
    report.record("x2(0)", x2, -1.0, rtol=1e-12)
    times = np.linspace(0.05, 3.0, 25)
    branch, residuals = saddle_dynamics.select_elliptic_branch(J, U, 1.0, 1.0 - 1e-7, times)
    report.require("elliptic branch", branch == "sn2" and residuals["sn2"] < 1e-6, str(residuals))
    state0 = saddle_dynamics.OdeState(*saddle_dynamics.hyperbolic_solution(0.0, J, U))
    trajectory = saddle_dynamics.integrate(state0, J, U, 20.0, 1e-3)
    report.require("invariant drift", trajectory.max_drift() < 1e-8, f"drift={trajectory.max_drift():.3e}")
    _, distance = saddle_dynamics.closest_approach(trajectory)
    report.require("plateau approach", distance < 1e-6, f"distance={distance:.3e}")
    shot = saddle_dynamics.shoot_plateau(J, U)
    report.require("shooting approach", shot.approach_distance < 1e-6,
                   f"distance={shot.approach_distance:.3e}")
    return report


def _trajectory() -> SuiteReport:
    report = SuiteReport("trajectory")
    for s in (0.0, 0.3, 1.0):
        k1, k2 = trajectory_sim.kraus_operators(s)
        report.require(f"kraus completeness s={s}",
                       np.allclose(k1.T @ k1 + k2.T @ k2, np.eye(2), atol=1e-12))
    params = ModelParams(J=1.0, U=1.0, q=4, mu=1.0, N=2, L=2)
    config = trajectory_sim.SimConfig(params=params, dt=0.05, steps=2, n_traj=1, seed=3)
    branches = trajectory_sim.enumerate_branches(config)
    report.record("branch weights", sum(b.weight for b in branches), 1.0, rtol=1e-10)
    qubits_a = trajectory_sim.half_cut_qubits(params)
    report.record(
        "quasi entropy limit",
        trajectory_sim.quasi_entropy_limit(branches, qubits_a, config.qubits),
        trajectory_sim.branch_average_entropy(branches, qubits_a, config.qubits),
        atol=1e-6,
    )
    return report


SUITES: Dict[str, Callable[[], SuiteReport]] = {
    "permutations": _permutations,
    "special": _special,
    "amplitudes": _amplitudes,
    "fock": _fock,
    "entropy": _entropy,
    "phase": _phase,
    "dynamics": _dynamics,
    "trajectory": _trajectory,
}


def run_suite(name: str) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    report = SUITES[name]()
    LOGGER.info("Suite %s: %s passed, %s failed", name, report.passed, report.failed)
    return report


def run_suites(names: List[str], strict: bool = True) -> List[SuiteReport]:
    """Run the named suites; with strict, raise VerificationFailure if any check fails."""
    reports = [run_suite(name) for name in names]
    failures = [check.name for report in reports for check in report.checks if not check.passed]
    if strict and failures:
        raise VerificationFailure(f"{len(failures)} checks failed: {', '.join(failures[:5])}")
    return reports
