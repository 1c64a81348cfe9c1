"""
Permutation combinatorics behind the replica saddle sum.

Permutations are stored as tuples of 0-based images; the JSON form is 1-based.
Pairs are keyed by tau_Abar and tau_A = eps o tau_Abar is always derived.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from config import MAX_ENUMERATION_N
from utils.exceptions import EnumerationBoundExceeded, InvalidParameter

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Permutation:
    images: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.images)

    def one_based(self) -> List[int]:
        return [image + 1 for image in self.images]


@dataclass(frozen=True)
class CycleDecomposition:
    """Cycle lengths in canonical order with the orbit of each cycle."""

    cycles: Tuple[int, ...]
    signs: Tuple[int, ...]
    orbits: Tuple[Tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.cycles)


@dataclass(frozen=True)
class PermutationPair:
    tau_Abar: Permutation
    cycles_A: CycleDecomposition
    cycles_Abar: CycleDecomposition

    @property
    def n(self) -> int:
        return self.tau_Abar.size

    @property
    def tau_A(self) -> Permutation:
        return compose(shift(self.n), self.tau_Abar)

    @property
    def m_cyc(self) -> int:
        return self.cycles_A.count + self.cycles_Abar.count

    def cycle_lengths(self) -> Tuple[int, ...]:
        """All cycle lengths of both members (n + 1 of them for a maximal pair)."""
        return self.cycles_A.cycles + self.cycles_Abar.cycles


def make_permutation(images: Sequence[int], one_based: bool = False) -> Permutation:
    """Validate a sequence of images and wrap it as a Permutation."""
    try:
        values = tuple(int(v) - (1 if one_based else 0) for v in images)
    except (TypeError, ValueError) as exc:
        raise InvalidParameter("permutation images must be integers", field="images") from exc
    if sorted(values) != list(range(len(values))):
        raise InvalidParameter(f"not a bijection on {len(values)} elements: {list(images)}", field="images")
    return Permutation(values)


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def shift(n: int) -> Permutation:
    """The n-cycle eps: alpha -> alpha + 1 mod n."""
    return Permutation(tuple((alpha + 1) % n for alpha in range(n)))


def compose(p: Permutation, r: Permutation) -> Permutation:
    """(p o r)(alpha) = p(r(alpha))."""
    if p.size != r.size:
        raise InvalidParameter("cannot compose permutations of different sizes", field="images")
    return Permutation(tuple(p.images[image] for image in r.images))


def _orbits(images: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    seen = [False] * len(images)
    orbits = []
    for start in range(len(images)):
        if seen[start]:
            continue
        orbit = []
        current = start
        while not seen[current]:
            seen[current] = True
            orbit.append(current)
            current = images[current]
        orbits.append(tuple(orbit))
    return orbits


def cycle_decompose(p: Permutation) -> CycleDecomposition:
    """
    Decompose a permutation into disjoint cycles.

    Cycles are ordered by descending length, then by their smallest element.
    Odd cycles carry sign +1 (plain cyclic), even cycles -1 (signed wrap entry).
    """
    make_permutation(p.images)
    orbits = sorted(_orbits(p.images), key=lambda orbit: (-len(orbit), orbit[0]))
    lengths = tuple(len(orbit) for orbit in orbits)
    signs = tuple(1 if length % 2 else -1 for length in lengths)
    return CycleDecomposition(cycles=lengths, signs=signs, orbits=tuple(orbits))


def reconstruct(decomposition: CycleDecomposition) -> Permutation:
    """Rebuild the permutation whose cycles are the given orbits."""
    size = sum(decomposition.cycles)
    images = [0] * size
    for orbit in decomposition.orbits:
        for position, element in enumerate(orbit):
            images[element] = orbit[(position + 1) % len(orbit)]
    return make_permutation(images)


def pair_cycle_count(tau_Abar: Permutation) -> int:
    """cycles(eps o tau_Abar) + cycles(tau_Abar)."""
    n = tau_Abar.size
    return len(_orbits(compose(shift(n), tau_Abar).images)) + len(_orbits(tau_Abar.images))


def make_pair(tau_Abar: Permutation) -> PermutationPair:
    tau_A = compose(shift(tau_Abar.size), tau_Abar)
    return PermutationPair(
        tau_Abar=tau_Abar,
        cycles_A=cycle_decompose(tau_A),
        cycles_Abar=cycle_decompose(tau_Abar),
    )


def cyclic_pair(n: int) -> PermutationPair:
    """The cyclic-symmetric saddle: tau_Abar = identity, tau_A = eps."""
    return make_pair(identity(n))


def catalan(n: int) -> int:
    """Exact Catalan number binomial(2n, n) / (n + 1)."""
    if n < 0:
        raise InvalidParameter(f"catalan needs n >= 0, got {n}", field="n")
    return math.comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def _maximal_pairs(n: int) -> Tuple[PermutationPair, ...]:
    pairs = []
    for images in itertools.permutations(range(n)):
        tau_Abar = Permutation(images)
        if pair_cycle_count(tau_Abar) == n + 1:
            pairs.append(make_pair(tau_Abar))
    return tuple(pairs)


def enumerate_maximal_pairs(n: int) -> Tuple[PermutationPair, ...]:
    """
    Exhaustively search S_n for pairs with the maximal n + 1 cycles.

    The order is lexicographic in tau_Abar. The count is checked against catalan(n).
    """
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}", field="n")
    if n > MAX_ENUMERATION_N:
        raise EnumerationBoundExceeded(
            f"exhaustive enumeration is limited to n <= {MAX_ENUMERATION_N}, got {n}"
        )
    pairs = _maximal_pairs(n)
    expected = catalan(n)
    if len(pairs) != expected:
        raise RuntimeError(f"found {len(pairs)} maximal pairs for n={n}, expected {expected}")
    LOGGER.debug("Enumerated %s maximal pairs for n=%s", len(pairs), n)
    return pairs


def canonical_cycle(length: int) -> np.ndarray:
    """
    Signed cycle matrix with entries delta^{alpha+1, beta}.

    Even lengths carry sgn(beta - alpha), so only the wrap-around entry is -1.
    """
    if length < 1:
        raise InvalidParameter(f"cycle length must be positive, got {length}", field="length")
    matrix = np.zeros((length, length))
    for alpha in range(length):
        beta = (alpha + 1) % length
        sign = 1.0
        if length % 2 == 0 and beta < alpha:
            sign = -1.0
        matrix[alpha, beta] = sign
    return matrix


def pair_to_dict(pair: PermutationPair) -> Dict[str, Any]:
    return {
        "n": pair.n,
        "tau_abar": pair.tau_Abar.one_based(),
        "cycles_A": list(pair.cycles_A.cycles),
        "cycles_Abar": list(pair.cycles_Abar.cycles),
    }
