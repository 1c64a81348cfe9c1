"""
Special functions used by the saddle-point pipeline.

Real-order Chebyshev functions stand in for the 2F1(x, -x; 1/2; z) family,
Jacobi elliptic functions use the arithmetic-geometric-mean descent, and the
Pfaffian is computed by Parlett-Reid tridiagonalization with pivoting.
"""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from config import PFAFFIAN_PIVOT_THRESHOLD, SKEW_TOLERANCE
from utils.exceptions import InvalidParameter

_MACHEP = 1.11022302462515654042e-16


def chebyshev_T(x: float, a: float) -> float:
    """
    Real-order Chebyshev function T_x(a).

    cos(x arccos a) on [-1, 1] and cosh(x arccosh a) above 1; for integer x
    this is the Chebyshev polynomial.
    """
    if a < -1.0:
        raise InvalidParameter(f"chebyshev_T needs a >= -1, got {a}", field="a")
    if a <= 1.0:
        return math.cos(x * math.acos(a))
    return math.cosh(x * math.acosh(a))


def hyp2f1_spectral(x: float, z: float) -> float:
    """2F1(x, -x; 1/2; z) evaluated as T_x(1 - 2z), valid for z <= 1/2."""
    if z > 0.5:
        raise InvalidParameter(f"hyp2f1_spectral supports z <= 1/2, got {z}", field="z")
    return chebyshev_T(x, 1.0 - 2.0 * z)


def hyp2f1_terminating(n: int, z: float) -> float:
    """Terminating series of 2F1(n, -n; 1/2; z) for integer n >= 0."""
    if n < 0 or int(n) != n:
        raise InvalidParameter(f"terminating series needs integer n >= 0, got {n}", field="n")
    total = 1.0
    term = 1.0
    for k in range(int(n)):
        term *= (n + k) * (-n + k) / ((0.5 + k) * (k + 1)) * z
        total += term
    return total


def _ellpj_unit(u: float, m: float) -> Tuple[float, float, float]:
    # Descent for 0 <= m <= 1 with the small-m and near-1 expansions at the ends
    if m < 1e-9:
        t = math.sin(u)
        b = math.cos(u)
        ai = 0.25 * m * (u - t * b)
        return t - ai * b, b + ai * t, 1.0 - 0.5 * m * t * t

    if m >= 0.9999999999:
        ai = 0.25 * (1.0 - m)
        b = math.cosh(u)
        t = math.tanh(u)
        phi = 1.0 / b
        twon = b * math.sinh(u)
        sn = t + ai * (twon - u) / (b * b)
        ai *= t * phi
        cn = phi - ai * (twon - u)
        dn = phi + ai * (twon + u)
        return sn, cn, dn

    a = [1.0]
    c = [math.sqrt(m)]
    b = math.sqrt(1.0 - m)
    twon = 1.0
    i = 0
    while abs(c[i] / a[i]) > _MACHEP:
        if i > 7:
            break
        ai = a[i]
        i += 1
        c.append((ai - b) / 2.0)
        t = math.sqrt(ai * b)
        a.append((ai + b) / 2.0)
        b = t
        twon *= 2.0

    phi = twon * a[i] * u
    previous = phi
    while i > 0:
        t = c[i] * math.sin(phi) / a[i]
        previous = phi
        phi = (math.asin(t) + phi) / 2.0
        i -= 1

    t = math.cos(phi)
    return math.sin(phi), t, t / math.cos(phi - previous)


def jacobi_sn_cn_dn(u: float, m: float) -> Tuple[float, float, float]:
    """
    Jacobi elliptic (sn, cn, dn) with parameter m = k^2.

    Parameters above 1 use sn(u|m) = sn(sqrt(m) u | 1/m) / sqrt(m),
    cn(u|m) = dn(sqrt(m) u | 1/m) and dn(u|m) = cn(sqrt(m) u | 1/m).
    """
    if m < 0.0:
        raise InvalidParameter(f"elliptic parameter must be >= 0, got {m}", field="m")
    if m <= 1.0:
        return _ellpj_unit(u, m)
    root = math.sqrt(m)
    sn, cn, dn = _ellpj_unit(root * u, 1.0 / m)
    return sn / root, dn, cn


def jacobi_sn_dn(u: float, m: float) -> Tuple[float, float]:
    """Jacobi sn and dn for m in [0, 1]."""
    if not 0.0 <= m <= 1.0:
        raise InvalidParameter(f"elliptic parameter must lie in [0, 1], got {m}", field="m")
    sn, _, dn = _ellpj_unit(u, m)
    return sn, dn


def _as_skew(A) -> np.ndarray:
    matrix = np.array(A, dtype=complex if np.iscomplexobj(A) else float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidParameter("Pfaffian needs a square matrix", field="A")
    if matrix.shape[0] % 2:
        raise InvalidParameter(f"Pfaffian needs even dimension, got {matrix.shape[0]}", field="A")
    if matrix.size and np.max(np.abs(matrix + matrix.T)) > SKEW_TOLERANCE * max(1.0, np.max(np.abs(matrix))):
        raise InvalidParameter("matrix is not antisymmetric", field="A")
    return matrix


def pfaffian(A):
    """
    Pfaffian by Parlett-Reid tridiagonal reduction with partial pivoting.

    Every pivot swap flips the sign; a pivot below the configured threshold
    means the matrix is numerically singular and 0 is returned.
    """
    A = _as_skew(A)
    n = A.shape[0]
    value = 1.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.abs(A[k + 1:, k]).argmax())
        if kp != k + 1:
            temp = A[k + 1, k:].copy()
            A[k + 1, k:] = A[kp, k:]
            A[kp, k:] = temp
            temp = A[k:, k + 1].copy()
            A[k:, k + 1] = A[k:, kp]
            A[k:, kp] = temp
            value *= -1

        if abs(A[k + 1, k]) < PFAFFIAN_PIVOT_THRESHOLD:
            return 0.0

        value *= A[k, k + 1]
        if k + 2 < n:
            tau = A[k, k + 2:] / A[k, k + 1]
            A[k + 2:, k + 2:] += np.outer(tau, A[k + 2:, k + 1])
            A[k + 2:, k + 2:] -= np.outer(A[k + 2:, k + 1], tau)
    return value


def momentum_values(n: int) -> np.ndarray:
    """
    Symmetric momenta of a length-n cycle.

    Odd n is periodic, k = 2j pi / n including 0; even n is antiperiodic,
    k = (2j - 1) pi / n with no zero mode.
    """
    if n < 1:
        raise InvalidParameter(f"cycle length must be positive, got {n}", field="n")
    if n % 2:
        half = (n - 1) // 2
        return np.array([2.0 * j * math.pi / n for j in range(-half, half + 1)])
    return np.array([(2.0 * j - 1.0) * math.pi / n for j in range(-n // 2 + 1, n // 2 + 1)])


def momentum_product(n: int, a: float) -> float:
    """Direct product of (2a + 2 cos k) over the momenta of a length-n cycle."""
    return float(np.prod(2.0 * a + 2.0 * np.cos(momentum_values(n))))


def trig_product_identity(n: int, a: float) -> Tuple[float, float]:
    """Both sides of prod_k (2a + 2 cos k) = 2 (T_n(a) + 1)."""
    return momentum_product(n, a), 2.0 * (chebyshev_T(n, a) + 1.0)
