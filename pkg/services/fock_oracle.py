"""
Brute-force Fock-space oracle for the closed-form amplitudes and replica traces.

Majoranas are built by Jordan-Wigner with gamma_{2q} = Z..Z X_q / sqrt(2) and
gamma_{2q+1} = Z..Z Y_q / sqrt(2), so {gamma_i, gamma_j} = delta_ij. Qubit 0 is
the most significant bit of a basis index.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from config import MAX_CYCLIC_COPY_MODES, MAX_FOCK_MODES
from services.permutation_saddles import canonical_cycle
from utils.exceptions import InvalidParameter, SizeCapExceeded

LOGGER = logging.getLogger(__name__)

_X = sparse.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex))
_Y = sparse.csr_matrix(np.array([[0.0, -1j], [1j, 0.0]], dtype=complex))
_Z = sparse.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex))
_I = sparse.identity(2, dtype=complex, format="csr")


@dataclass(frozen=True)
class MajoranaAlgebra:
    m: int
    matrices: Tuple[sparse.csr_matrix, ...]

    @property
    def dimension(self) -> int:
        return 2 ** (self.m // 2)

    def dense(self, index: int) -> np.ndarray:
        return self.matrices[index].toarray()


@dataclass(frozen=True)
class EprState:
    vector: np.ndarray
    pairs: int
    layout: str


def _nested_kron(factors: Sequence[sparse.spmatrix]) -> sparse.csr_matrix:
    return reduce(lambda a, b: sparse.kron(a, b, format="csr"), factors)


@lru_cache(maxsize=16)
def build_majorana_ops(m: int) -> MajoranaAlgebra:
    """Jordan-Wigner Majorana matrices for m (even) modes, stored sparse."""
    if m <= 0 or m % 2:
        raise InvalidParameter(f"number of Majorana modes must be even and positive, got {m}", field="m")
    if m > MAX_FOCK_MODES:
        raise SizeCapExceeded(f"{m} Majorana modes exceed the cap of {MAX_FOCK_MODES}")

    qubits = m // 2
    matrices: List[sparse.csr_matrix] = []
    for q in range(qubits):
        for pauli in (_X, _Y):
            factors = [_Z] * q + [pauli] + [_I] * (qubits - q - 1)
            matrices.append(_nested_kron(factors) / math.sqrt(2.0))
    LOGGER.debug("Built %s Majorana operators of dimension %s", m, 2 ** qubits)
    return MajoranaAlgebra(m=m, matrices=tuple(matrices))


def _pair_indices(pairs: int, layout: str) -> List[Tuple[int, int]]:
    if layout == "interleaved":
        return [(2 * j, 2 * j + 1) for j in range(pairs)]
    if layout == "blocked":
        return [(j, pairs + j) for j in range(pairs)]
    raise InvalidParameter(f"unknown EPR layout {layout!r}", field="layout")


def epr_state(pairs: int, layout: str = "interleaved") -> EprState:
    """
    The state annihilated by psi_j + i chi_j for every pair j.

    layout "interleaved" orders modes psi_1, chi_1, psi_2, ...; "blocked" puts
    all psi before all chi. The global phase makes the largest component real.
    """
    if pairs < 1:
        raise InvalidParameter(f"pairs must be >= 1, got {pairs}", field="pairs")
    if 2 * pairs > MAX_FOCK_MODES:
        raise SizeCapExceeded(f"{2 * pairs} Majorana modes exceed the cap of {MAX_FOCK_MODES}")

    algebra = build_majorana_ops(2 * pairs)
    number = sparse.csr_matrix((algebra.dimension, algebra.dimension), dtype=complex)
    for psi, chi in _pair_indices(pairs, layout):
        c = (algebra.matrices[psi] + 1j * algebra.matrices[chi]) / math.sqrt(2.0)
        number = number + c.conj().T @ c

    _, vectors = np.linalg.eigh(number.toarray())
    vector = vectors[:, 0]
    pivot = int(np.argmax(np.abs(vector)))
    vector = vector * (abs(vector[pivot]) / vector[pivot])
    return EprState(vector=vector / np.linalg.norm(vector), pairs=pairs, layout=layout)


def _mode_index(replica: int, chain: int, flavor: int, chains: int) -> int:
    # replica-major, then chain, then psi (0) before chi (1)
    return (replica * chains + chain) * 2 + flavor


def cycle_hamiltonian(
    cycle_lengths: Sequence[int],
    theta: float,
    scale: float,
    chains: int,
) -> sparse.csr_matrix:
    """
    Fock-space Hamiltonian for a direct sum of cycles.

    Each cycle contributes -i Lambda tau^{beta alpha} psi^alpha chi^beta per chain
    with tau the signed canonical cycle; two chains add
    i mu psi_L psi_R - i mu chi_L chi_R per replica. Lambda = scale cos(theta),
    mu = scale sin(theta).
    """
    if chains not in (1, 2):
        raise InvalidParameter(f"chains must be 1 or 2, got {chains}", field="chains")
    replicas = int(sum(cycle_lengths))
    modes = 2 * chains * replicas
    if modes > MAX_FOCK_MODES:
        raise SizeCapExceeded(f"{modes} Majorana modes exceed the cap of {MAX_FOCK_MODES}")

    lam = scale * math.cos(theta)
    mu = scale * math.sin(theta)
    gamma = build_majorana_ops(modes).matrices
    dim = 2 ** (modes // 2)
    H = sparse.csr_matrix((dim, dim), dtype=complex)

    offset = 0
    for length in cycle_lengths:
        tau = canonical_cycle(length)
        for beta, alpha in zip(*np.nonzero(tau)):
            for chain in range(chains):
                psi = gamma[_mode_index(offset + alpha, chain, 0, chains)]
                chi = gamma[_mode_index(offset + beta, chain, 1, chains)]
                H = H + (-1j * lam * tau[beta, alpha]) * (psi @ chi)
        offset += length

    if chains == 2 and mu != 0.0:
        for replica in range(replicas):
            psi_L = gamma[_mode_index(replica, 0, 0, 2)]
            psi_R = gamma[_mode_index(replica, 1, 0, 2)]
            chi_L = gamma[_mode_index(replica, 0, 1, 2)]
            chi_R = gamma[_mode_index(replica, 1, 1, 2)]
            H = H + 1j * mu * (psi_L @ psi_R) - 1j * mu * (chi_L @ chi_R)
    return H


@lru_cache(maxsize=64)
def _spectral_weights(
    cycle_lengths: Tuple[int, ...],
    theta: float,
    scale: float,
    chains: int,
) -> Tuple[np.ndarray, np.ndarray]:
    H = cycle_hamiltonian(cycle_lengths, theta, scale, chains).toarray()
    energies, vectors = np.linalg.eigh(H)
    # the EPR state is the all-zero basis state in the interleaved layout
    return energies, np.abs(vectors[0, :]) ** 2


def oracle_pair_amplitude(
    cycle_lengths: Sequence[int],
    theta: float,
    scale: float,
    T: float,
    chains: int,
    strip: float = 0.0,
) -> float:
    """<EPR| e^{T H} |EPR> * e^{-strip T} for a direct sum of cycles."""
    if T < 0:
        raise InvalidParameter(f"T must be >= 0, got {T}", field="T")
    energies, weights = _spectral_weights(tuple(int(n) for n in cycle_lengths), float(theta), float(scale), chains)
    return float(np.sum(weights * np.exp(T * (energies - strip))))


def oracle_cycle_amplitude(cycle_length: int, theta: float, scale: float, T: float, chains: int) -> float:
    """Exact <EPR| e^{T H(tau)} |EPR> for a single cycle."""
    return oracle_pair_amplitude((cycle_length,), theta, scale, T, chains)


def cyclic_permutation_operator(n: int, N: int) -> np.ndarray:
    """
    Fermionic cyclic replica permutation prod_i prod_alpha exp(pi/2 psi^alpha_i psi^{alpha+1}_i).

    Modes are replica-major (index alpha * N + i); an odd total is padded with
    one idle mode. Conjugation sends psi^alpha to sgn(alpha - beta) psi^beta
    with beta = alpha + 1 cyclically.
    """
    if n < 1 or N < 1:
        raise InvalidParameter("n and N must be positive", field="n")
    modes = n * N
    if modes > MAX_CYCLIC_COPY_MODES:
        raise SizeCapExceeded(f"{modes} replicated modes exceed the cap of {MAX_CYCLIC_COPY_MODES}")
    padded = modes + (modes % 2)
    gamma = build_majorana_ops(padded).matrices
    dim = 2 ** (padded // 2)
    operator = sparse.identity(dim, dtype=complex, format="csr")
    for i in range(N):
        for alpha in range(n - 1):
            a = gamma[alpha * N + i]
            b = gamma[(alpha + 1) * N + i]
            # exp(pi/2 a b) = (1 + 2 a b) / sqrt(2) since (a b)^2 = -1/4
            factor = (sparse.identity(dim, dtype=complex, format="csr") + 2.0 * (a @ b)) / math.sqrt(2.0)
            operator = operator @ factor
    return operator.toarray()


def partial_trace(rho: np.ndarray, keep: Sequence[int], qubits: int) -> np.ndarray:
    """Reduced density matrix on the kept qubits (in the given order)."""
    keep = list(keep)
    traced = [q for q in range(qubits) if q not in keep]
    tensor = rho.reshape([2] * (2 * qubits))
    order = keep + traced + [qubits + q for q in keep] + [qubits + q for q in traced]
    tensor = tensor.transpose(order)
    dk, dt = 2 ** len(keep), 2 ** len(traced)
    return np.einsum("ajbj->ab", tensor.reshape(dk, dt, dk, dt))


def register_cyclic_permutation(n: int, qubits: int, subsystem: Sequence[int]) -> np.ndarray:
    """
    Permutation matrix moving the subsystem qubits of replica alpha to replica alpha + 1.

    Acts on n blocks of `qubits` qubits; Tr[rho^{(x)n} C] = Tr[rho_A^n].
    """
    total = n * qubits
    dim = 2 ** total
    matrix = np.zeros((dim, dim))
    subsystem = list(subsystem)
    for index in range(dim):
        bits = [(index >> (total - 1 - q)) & 1 for q in range(total)]
        moved = list(bits)
        for alpha in range(n):
            target = (alpha + 1) % n
            for q in subsystem:
                moved[target * qubits + q] = bits[alpha * qubits + q]
        image = 0
        for bit in moved:
            image = (image << 1) | bit
        matrix[image, index] = 1.0
    return matrix


def _replicate(rho: np.ndarray, n: int) -> np.ndarray:
    return reduce(np.kron, [rho] * n)


def oracle_renyi_trace(rho: np.ndarray, n: int, subsystem: Sequence[int]) -> Tuple[float, float]:
    """
    Tr[rho_A^n] two ways: the replica trace Tr[rho^{(x)n} C_A] and the partial-trace power.

    Returns (replica_value, direct_value).
    """
    qubits = int(round(math.log2(rho.shape[0])))
    if 2 * qubits * n > MAX_FOCK_MODES:
        raise SizeCapExceeded(f"{n} replicas of {qubits} qubits exceed the cap of {MAX_FOCK_MODES} modes")
    C = register_cyclic_permutation(n, qubits, subsystem)
    replica = np.trace(_replicate(rho, n) @ C)
    reduced = partial_trace(rho, subsystem, qubits)
    direct = np.trace(np.linalg.matrix_power(reduced, n))
    return float(np.real(replica)), float(np.real(direct))


def fermionic_replica_trace(rho: np.ndarray, n: int) -> float:
    """Tr[rho^{(x)n} M_cyc] for an even-parity density matrix on N = 2 log2(dim) Majoranas."""
    qubits = int(round(math.log2(rho.shape[0])))
    M = cyclic_permutation_operator(n, 2 * qubits)
    return float(np.real(np.trace(_replicate(rho, n) @ M)))


def epr_replica_trace(rho: np.ndarray, n: int) -> float:
    """
    d^n <EPR| (rho^{(x)n} M_cyc) (x) 1 |EPR> with the EPR partners in a separate block.

    All psi modes of all replicas come before all chi modes, so operators on
    the psi register are plain Kronecker factors.
    """
    qubits = int(round(math.log2(rho.shape[0])))
    psi_modes = 2 * qubits * n
    epr = epr_state(psi_modes, layout="blocked").vector
    system = _replicate(rho, n) @ cyclic_permutation_operator(n, 2 * qubits)
    operator = np.kron(system, np.eye(system.shape[0]))
    d = 2 ** (qubits * n)
    return float(np.real(d * np.vdot(epr, operator @ epr)))


def random_density_matrix(
    qubits: int,
    rng: np.random.Generator,
    parity_even: bool = False,
    rank: Optional[int] = None,
) -> np.ndarray:
    """Random mixed state; parity_even restricts it to the even-parity sector."""
    dim = 2 ** qubits
    rank = rank or dim
    G = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    if parity_even:
        odd = np.array([bin(index).count("1") % 2 == 1 for index in range(dim)])
        G[odd, :] = 0.0
    rho = G @ G.conj().T
    return rho / np.trace(rho).real
