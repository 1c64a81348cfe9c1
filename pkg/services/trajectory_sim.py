"""
Small-N Monte Carlo of the monitored Brownian SYK chains.

Each (site x, flavor i) pair of Majoranas psi_{x,L,i}, psi_{x,R,i} is one
qubit k = x N + i, with psi_{x,L,i} = gamma_{2k} and psi_{x,R,i} = gamma_{2k+1}
in the Jordan-Wigner basis. The pair projector pi^+ = (1 - 2i psi_L psi_R) / 2
is then |0><0| on qubit k, so the Kraus pair acts diagonally per qubit.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import expm_multiply

from config import (
    ESTIMATOR_BATCHES,
    MAX_ENUMERATED_EVENTS,
    MAX_STRENGTH_SQUARED,
    MAX_TRAJECTORY_MODES,
    WORKERS,
)
from services.fock_oracle import build_majorana_ops
from services.model_core import ModelParams, measurement_strength, validate
from utils.exceptions import InvalidParameter, SizeCapExceeded, ZeroNormState

LOGGER = logging.getLogger(__name__)

INITIAL_STATES = ("epr", "parity-product")
UNITARY_CHANNEL = 0
MEASUREMENT_CHANNEL = 1
_ZERO_NORM = 1e-300


@dataclass(frozen=True)
class SimConfig:
    params: ModelParams
    dt: float
    steps: int
    n_traj: int = 1
    seed: int = 0
    initial_state: str = "epr"

    @property
    def qubits(self) -> int:
        return self.params.L * self.params.N

    @property
    def strength(self) -> float:
        return measurement_strength(self.params.mu, self.dt)


@dataclass
class TrajectoryRecord:
    outcomes: Tuple[Tuple[int, ...], ...]
    weight: float
    entropy_series: np.ndarray
    parities: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))


@dataclass
class EntropyCurve:
    times: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    n_traj: int
    stderr_defined: bool


@dataclass
class Branch:
    """One outcome history with its unnormalized state; weight = Tr rho_nu."""

    outcomes: Tuple[int, ...]
    weight: float
    state: np.ndarray


def validate_config(config: SimConfig) -> SimConfig:
    params = validate(config.params)
    if 2 * params.L * params.N > MAX_TRAJECTORY_MODES:
        raise SizeCapExceeded(
            f"2 L N = {2 * params.L * params.N} Majorana modes exceed the cap of {MAX_TRAJECTORY_MODES}"
        )
    if params.L < 2:
        raise InvalidParameter("the half-chain cut needs L >= 2", field="L")
    if config.dt <= 0:
        raise InvalidParameter(f"dt must be positive, got {config.dt}", field="dt")
    if config.steps < 0:
        raise InvalidParameter(f"steps must be >= 0, got {config.steps}", field="steps")
    if config.n_traj < 1:
        raise InvalidParameter(f"n_traj must be >= 1, got {config.n_traj}", field="n_traj")
    if params.mu * config.dt > MAX_STRENGTH_SQUARED:
        raise InvalidParameter(
            f"s^2 = mu dt = {params.mu * config.dt:.4g} exceeds {MAX_STRENGTH_SQUARED}", field="dt"
        )
    if config.initial_state not in INITIAL_STATES:
        raise InvalidParameter(
            f"initial_state must be one of {INITIAL_STATES}, got {config.initial_state!r}", field="initial_state"
        )
    if params.q // 2 > params.N:
        raise InvalidParameter(f"q/2 = {params.q // 2} exceeds N = {params.N}", field="q")
    return config


def step_rng(seed: int, trajectory: int, step: int, channel: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, trajectory, step, channel)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trajectory, step, channel])))


# =============================================================================
# OPERATORS
# =============================================================================

def _majorana(gammas, L: int, N: int, x: int, chain: int, flavor: int):
    return gammas[2 * ((x % L) * N + flavor) + chain]


@lru_cache(maxsize=16)
def _interaction_terms(L: int, N: int, q: int) -> Tuple[Tuple[str, sparse.csr_matrix], ...]:
    """Hermitian operators of the intra-site pair and nearest-neighbour q-body terms."""
    gammas = build_majorana_ops(2 * L * N).matrices
    half = q // 2
    phase = 1j ** half
    terms: List[Tuple[str, sparse.csr_matrix]] = []
    for chain in (0, 1):
        for x in range(L):
            for i, j in itertools.combinations(range(N), 2):
                op = 1j * (_majorana(gammas, L, N, x, chain, i) @ _majorana(gammas, L, N, x, chain, j))
                terms.append(("J", op.tocsr()))
        if L < 2:
            continue
        for x in range(L):
            for left in itertools.combinations(range(N), half):
                for right in itertools.combinations(range(N), half):
                    op = phase * sparse.identity(2 ** (L * N), dtype=complex, format="csr")
                    for flavor in left:
                        op = op @ _majorana(gammas, L, N, x, chain, flavor)
                    for flavor in right:
                        op = op @ _majorana(gammas, L, N, x + 1, chain, flavor)
                    terms.append(("U", op.tocsr()))
    LOGGER.debug("Built %s Brownian terms for L=%s N=%s q=%s", len(terms), L, N, q)
    return tuple(terms)


def coupling_variances(params: ModelParams) -> Tuple[float, float]:
    """Variance coefficients 4J/N and 2^q ((q/2)!)^2 U / (q N^{q-1}) of the Brownian couplings."""
    q = params.q
    j_var = 4.0 * params.J / params.N
    u_var = 2.0 ** q * math.factorial(q // 2) ** 2 * params.U / (q * params.N ** (q - 1))
    return j_var, u_var


def _term_variances(params: ModelParams) -> np.ndarray:
    j_var, u_var = coupling_variances(params)
    terms = _interaction_terms(params.L, params.N, params.q)
    return np.array([j_var if kind == "J" else u_var for kind, _ in terms])


def sample_hamiltonian(params: ModelParams, dt: float, rng: np.random.Generator) -> sparse.csr_matrix:
    """
    One Brownian Hamiltonian for a step of length dt.

    Couplings are drawn with variance (coefficient) / dt, so H dt carries the
    delta-correlated statistics of the continuum couplings.
    """
    terms = _interaction_terms(params.L, params.N, params.q)
    couplings = rng.standard_normal(len(terms)) * np.sqrt(_term_variances(params) / dt)
    dimension = 2 ** (params.L * params.N)
    hamiltonian = sparse.csr_matrix((dimension, dimension), dtype=complex)
    for coupling, (_, op) in zip(couplings, terms):
        if coupling != 0.0:
            hamiltonian = hamiltonian + coupling * op
    return hamiltonian


def sample_unitary_step(params: ModelParams, dt: float, rng: np.random.Generator) -> np.ndarray:
    """Dense e^{-i H dt} for one sampled Hamiltonian."""
    params = validate(params)
    if 2 * params.L * params.N > MAX_TRAJECTORY_MODES:
        raise SizeCapExceeded(f"2 L N = {2 * params.L * params.N} exceeds the cap of {MAX_TRAJECTORY_MODES}")
    return linalg.expm(-1j * dt * sample_hamiltonian(params, dt, rng).toarray())


def return_probability_rate(state: np.ndarray, params: ModelParams) -> float:
    """
    First-order loss rate of |<phi| U |phi>|^2 averaged over one step.

    sum_k c_k (<O_k^2> - <O_k>^2) with c_k the coupling variance coefficient
    of the Hermitian term O_k.
    """
    terms = _interaction_terms(params.L, params.N, params.q)
    rate = 0.0
    for variance, (_, op) in zip(_term_variances(params), terms):
        image = op @ state
        mean = np.vdot(state, image).real
        rate += variance * (np.vdot(image, image).real - mean ** 2)
    return float(rate)


def parity_projector(qubits: int, k: int) -> np.ndarray:
    """pi^+ = (1 - 2i psi_L psi_R) / 2 for qubit k, built from the Majorana matrices."""
    gammas = build_majorana_ops(2 * qubits).matrices
    identity = sparse.identity(2 ** qubits, dtype=complex, format="csr")
    return (0.5 * (identity - 2j * (gammas[2 * k] @ gammas[2 * k + 1]))).toarray()


def kraus_operators(s: float) -> Tuple[np.ndarray, np.ndarray]:
    """Single-qubit K1 = pi^- + sqrt(1 - s^2) pi^+ and K2 = s pi^+ with pi^+ = |0><0|."""
    if not 0.0 <= s <= 1.0:
        raise InvalidParameter(f"measurement strength must lie in [0, 1], got {s}", field="s")
    return np.diag([math.sqrt(1.0 - s * s), 1.0]), np.diag([s, 0.0])


# =============================================================================
# STATES AND ENTROPY
# =============================================================================

def initial_state(qubits: int, kind: str = "epr") -> np.ndarray:
    """
    "epr" is annihilated by every psi_L + i psi_R (all pairs in pi^+);
    "parity-product" has every pair in pi^-, the dark state of the Kraus pair.
    """
    if kind not in INITIAL_STATES:
        raise InvalidParameter(f"initial_state must be one of {INITIAL_STATES}, got {kind!r}", field="initial_state")
    state = np.zeros(2 ** qubits, dtype=complex)
    state[0 if kind == "epr" else -1] = 1.0
    return state


def half_cut_qubits(params: ModelParams) -> int:
    """Qubits of the sites x < L/2, which form subsystem A."""
    return (params.L // 2) * params.N


def entanglement_entropy(state: np.ndarray, qubits_a: int, qubits: int) -> float:
    """Von Neumann entropy of the first qubits_a qubits of a (possibly unnormalized) pure state."""
    matrix = np.asarray(state).reshape(2 ** qubits_a, 2 ** (qubits - qubits_a))
    singular = np.linalg.svd(matrix, compute_uv=False)
    probabilities = singular ** 2
    probabilities = probabilities / probabilities.sum()
    probabilities = probabilities[probabilities > 1e-300]
    return float(-np.sum(probabilities * np.log(probabilities)))


def renyi_spectrum(state: np.ndarray, qubits_a: int, qubits: int) -> np.ndarray:
    """Unnormalized eigenvalues of rho_A for the pure state."""
    matrix = np.asarray(state).reshape(2 ** qubits_a, 2 ** (qubits - qubits_a))
    return np.linalg.svd(matrix, compute_uv=False) ** 2


def site_parities(state: np.ndarray, L: int, N: int) -> np.ndarray:
    """<prod_i Z_{x,i}> for every site x."""
    qubits = L * N
    probabilities = np.abs(np.asarray(state)) ** 2
    indices = np.arange(2 ** qubits)
    values = []
    for x in range(L):
        sign = np.ones(2 ** qubits)
        for i in range(N):
            bit = (indices >> (qubits - 1 - (x * N + i))) & 1
            sign = sign * (1 - 2 * bit)
        values.append(float(np.sum(sign * probabilities) / np.sum(probabilities)))
    return np.array(values)


# =============================================================================
# MEASUREMENT
# =============================================================================

def _qubit_view(state: np.ndarray, k: int, qubits: int) -> np.ndarray:
    return state.reshape(2 ** k, 2, 2 ** (qubits - k - 1))


def apply_measurement_layer(
    state: np.ndarray, s: float, rng: np.random.Generator
) -> Tuple[np.ndarray, Tuple[int, ...], float]:
    """
    Born-sample K1 or K2 on every qubit in order.

    Returns the renormalized state, the outcomes (1 or 2 per qubit) and the
    product of the branch probabilities.
    """
    kraus_operators(s)
    qubits = int(round(math.log2(len(state))))
    state = np.array(state, dtype=complex)
    outcomes: List[int] = []
    weight = 1.0
    for k in range(qubits):
        view = _qubit_view(state, k, qubits)
        plus = float(np.vdot(view[:, 0, :], view[:, 0, :]).real)
        total = float(np.vdot(state, state).real)
        p_two = s * s * plus / total
        if rng.random() < p_two:
            view[:, 1, :] = 0.0
            outcomes.append(2)
            probability = p_two
        else:
            view[:, 0, :] *= math.sqrt(1.0 - s * s)
            outcomes.append(1)
            probability = 1.0 - p_two
        norm = np.linalg.norm(state)
        if probability <= 0.0 or norm < _ZERO_NORM:
            raise ZeroNormState(f"measurement branch on qubit {k} has zero norm")
        state = state / norm
        weight *= probability
    return state, tuple(outcomes), weight


# =============================================================================
# TRAJECTORIES
# =============================================================================

def run_trajectory(config: SimConfig, seed: Optional[int] = None, trajectory: int = 0) -> TrajectoryRecord:
    """
    Alternate a Brownian unitary layer and a measurement layer for config.steps steps.

    The half-cut entropy is recorded at t = 0 and after every step.
    """
    validate_config(config)
    params = config.params
    seed = config.seed if seed is None else seed
    qubits = config.qubits
    qubits_a = half_cut_qubits(params)
    s = config.strength

    state = initial_state(qubits, config.initial_state)
    entropies = [entanglement_entropy(state, qubits_a, qubits)]
    parities = [site_parities(state, params.L, params.N)]
    outcomes: List[Tuple[int, ...]] = []
    weight = 1.0
    for step in range(config.steps):
        hamiltonian = sample_hamiltonian(params, config.dt, step_rng(seed, trajectory, step, UNITARY_CHANNEL))
        state = expm_multiply(-1j * config.dt * hamiltonian, state)
        state = state / np.linalg.norm(state)
        state, layer, factor = apply_measurement_layer(
            state, s, step_rng(seed, trajectory, step, MEASUREMENT_CHANNEL)
        )
        outcomes.append(layer)
        weight *= factor
        entropies.append(entanglement_entropy(state, qubits_a, qubits))
        parities.append(site_parities(state, params.L, params.N))
    return TrajectoryRecord(
        outcomes=tuple(outcomes),
        weight=weight,
        entropy_series=np.array(entropies),
        parities=np.array(parities),
    )


def _trajectory_entropy(args: Tuple[SimConfig, int]) -> np.ndarray:
    config, index = args
    return run_trajectory(config, trajectory=index).entropy_series


def batch_mean_stderr(samples: np.ndarray, batches: int = ESTIMATOR_BATCHES) -> Tuple[np.ndarray, np.ndarray]:
    """
    Mean over axis 0 and its standard error from contiguous batch means.

    Fewer samples than batches means one sample per batch; a single sample
    has an undefined (NaN) error.
    """
    samples = np.asarray(samples, dtype=float)
    mean = samples.mean(axis=0)
    count = samples.shape[0]
    if count < 2:
        return mean, np.full_like(mean, np.nan)
    batches = min(batches, count)
    batch_means = np.array([chunk.mean(axis=0) for chunk in np.array_split(samples, batches)])
    return mean, batch_means.std(axis=0, ddof=1) / math.sqrt(batches)


def estimate_entropy_curve(config: SimConfig, workers: int = WORKERS) -> EntropyCurve:
    """Plain mean over Born-sampled trajectories, reduced in trajectory order."""
    validate_config(config)
    jobs = [(config, index) for index in range(config.n_traj)]
    if workers > 1 and config.n_traj > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            series = list(pool.map(_trajectory_entropy, jobs))
    else:
        series = [_trajectory_entropy(job) for job in jobs]
    mean, stderr = batch_mean_stderr(np.stack(series))
    if config.n_traj < 2:
        LOGGER.warning("Single trajectory: the standard error is undefined")
    times = config.dt * np.arange(config.steps + 1)
    return EntropyCurve(times=times, mean=mean, stderr=stderr, n_traj=config.n_traj,
                        stderr_defined=config.n_traj >= 2)


def steady_state_mean(curve: EntropyCurve, tail: float = 0.5) -> Tuple[float, float]:
    """Average of the last `tail` fraction of the mean curve and its pooled error."""
    if not 0.0 < tail <= 1.0:
        raise InvalidParameter(f"tail must lie in (0, 1], got {tail}", field="tail")
    start = int(len(curve.mean) * (1.0 - tail))
    window = slice(min(start, len(curve.mean) - 1), None)
    mean = float(np.mean(curve.mean[window]))
    error = float(np.sqrt(np.mean(curve.stderr[window] ** 2))) if curve.stderr_defined else math.nan
    return mean, error


# =============================================================================
# EXHAUSTIVE OUTCOMES
# =============================================================================

def enumerate_branches(config: SimConfig, trajectory: int = 0) -> List[Branch]:
    """
    Every outcome history of the process with the unitaries of one trajectory.

    Branch states stay unnormalized, so weight = <phi_nu|phi_nu> = Tr rho_nu
    and the weights sum to one. Zero-weight branches are dropped.
    """
    validate_config(config)
    events = config.steps * config.qubits
    if events > MAX_ENUMERATED_EVENTS:
        raise SizeCapExceeded(f"{events} measurement events exceed the enumeration cap of {MAX_ENUMERATED_EVENTS}")

    params = config.params
    qubits = config.qubits
    s = config.strength
    scale_keep = math.sqrt(1.0 - s * s)
    branches = [Branch(outcomes=(), weight=1.0, state=initial_state(qubits, config.initial_state))]
    for step in range(config.steps):
        hamiltonian = sample_hamiltonian(params, config.dt, step_rng(config.seed, trajectory, step, UNITARY_CHANNEL))
        generator = -1j * config.dt * hamiltonian
        evolved = [Branch(b.outcomes, b.weight, expm_multiply(generator, b.state)) for b in branches]
        for k in range(qubits):
            split: List[Branch] = []
            for branch in evolved:
                for outcome in (1, 2):
                    state = branch.state.copy()
                    view = _qubit_view(state, k, qubits)
                    if outcome == 1:
                        view[:, 0, :] *= scale_keep
                    else:
                        view[:, 0, :] *= s
                        view[:, 1, :] = 0.0
                    weight = float(np.vdot(state, state).real)
                    if weight > _ZERO_NORM:
                        split.append(Branch(branch.outcomes + (outcome,), weight, state))
            evolved = split
        branches = evolved
    LOGGER.debug("Enumerated %s branches over %s events", len(branches), events)
    return branches


def quasi_entropy_from_branches(branches: Sequence[Branch], n: float, qubits_a: int, qubits: int) -> float:
    """(1/(1-n)) log[sum_nu Tr(rho_{nu,A}^n) / sum_nu (Tr rho_nu)^n] for real n != 1."""
    if n <= 0 or n == 1:
        raise InvalidParameter(f"quasi entropy needs n > 0 and n != 1, got {n}", field="n")
    numerator = 0.0
    denominator = 0.0
    for branch in branches:
        spectrum = renyi_spectrum(branch.state, qubits_a, qubits)
        spectrum = spectrum[spectrum > 0.0]
        numerator += float(np.sum(spectrum ** n))
        denominator += branch.weight ** n
    return math.log(numerator / denominator) / (1.0 - n)


def quasi_entropy_limit(branches: Sequence[Branch], qubits_a: int, qubits: int, h: float = 1e-4) -> float:
    """Symmetric average of the quasi entropy at n = 1 +/- h."""
    return 0.5 * (
        quasi_entropy_from_branches(branches, 1.0 + h, qubits_a, qubits)
        + quasi_entropy_from_branches(branches, 1.0 - h, qubits_a, qubits)
    )


def branch_average_entropy(branches: Sequence[Branch], qubits_a: int, qubits: int) -> float:
    """sum_nu Tr(rho_nu) S_A(nu)."""
    return float(sum(branch.weight * entanglement_entropy(branch.state, qubits_a, qubits) for branch in branches))
