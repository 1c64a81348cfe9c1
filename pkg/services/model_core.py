"""
Shared parameter types for the monitored Brownian SYK chains.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Mapping, Tuple

from utils.exceptions import InvalidParameter

PARAM_KEYS = ("J", "U", "q", "mu", "N", "L")
REPLICA_KEYS = ("n", "T")


@dataclass(frozen=True)
class ModelParams:
    """Couplings (J, U, q, mu) and sizes (N, L) of the two coupled chains."""

    J: float = 1.0
    U: float = 0.0
    q: int = 4
    mu: float = 0.0
    N: int = 8
    L: int = 2

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ReplicaConfig:
    n: float = 2
    T: float = 0.0


@dataclass(frozen=True)
class SaddleAngle:
    """Large-N saddle parametrized by the off-diagonal amplitude and tan(theta) = mu / lambda."""

    lam: float
    theta: float


def _require_number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidParameter(f"{name} must be a real number, got {value!r}", field=name)
    if not math.isfinite(value):
        raise InvalidParameter(f"{name} must be finite, got {value!r}", field=name)
    return value


def _require_integer(value: Any, name: str) -> int:
    if isinstance(value, bool):
        raise InvalidParameter(f"{name} must be an integer, got {value!r}", field=name)
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if not isinstance(value, int):
        raise InvalidParameter(f"{name} must be an integer, got {value!r}", field=name)
    return value


def validate(params: ModelParams) -> ModelParams:
    """
    Check every invariant of ModelParams.

    Returns the same (immutable) instance when valid, so validate is idempotent.
    Raises InvalidParameter naming the first failing field.
    """
    J = _require_number(params.J, "J")
    U = _require_number(params.U, "U")
    mu = _require_number(params.mu, "mu")
    q = _require_integer(params.q, "q")
    N = _require_integer(params.N, "N")
    L = _require_integer(params.L, "L")

    if J < 0:
        raise InvalidParameter(f"J must be >= 0, got {J}", field="J")
    if U < 0:
        raise InvalidParameter(f"U must be >= 0, got {U}", field="U")
    if J + U <= 0:
        raise InvalidParameter("J + U must be positive", field="J")
    if q <= 0 or q % 4 != 0:
        raise InvalidParameter(f"q must be multiple of 4, got {q}", field="q")
    if mu < 0:
        raise InvalidParameter(f"mu must be >= 0, got {mu}", field="mu")
    if N <= 0 or N % 2 != 0:
        raise InvalidParameter(f"N must be even, got {N}", field="N")
    if L < 1:
        raise InvalidParameter(f"L must be >= 1, got {L}", field="L")
    return params


def replica_config(n: float, T: float = 0.0) -> ReplicaConfig:
    """Build a ReplicaConfig; n may be real for analytic continuation."""
    n = _require_number(n, "n")
    T = _require_number(T, "T")
    if n <= 0:
        raise InvalidParameter(f"n must be positive, got {n}", field="n")
    if T < 0:
        raise InvalidParameter(f"T must be >= 0, got {T}", field="T")
    return ReplicaConfig(n=n, T=T)


def saddle_angle(lam: float, mu: float) -> SaddleAngle:
    """Return the saddle angle theta = atan2(mu, lambda) in [0, pi/2]."""
    lam = _require_number(lam, "lambda")
    mu = _require_number(mu, "mu")
    if lam < 0:
        raise InvalidParameter(f"lambda must be >= 0, got {lam}", field="lambda")
    if mu < 0:
        raise InvalidParameter(f"mu must be >= 0, got {mu}", field="mu")
    if lam == 0 and mu == 0:
        raise InvalidParameter("lambda and mu cannot both vanish", field="lambda")
    if lam == 0:
        return SaddleAngle(lam=0.0, theta=math.pi / 2)
    return SaddleAngle(lam=lam, theta=math.atan2(mu, lam))


def measurement_strength(mu: float, dt: float) -> float:
    """Kraus strength s with s^2 = mu * dt."""
    if mu < 0 or dt <= 0:
        raise InvalidParameter("measurement strength needs mu >= 0 and dt > 0", field="mu")
    return math.sqrt(mu * dt)


def params_from_mapping(mapping: Mapping[str, Any]) -> Tuple[ModelParams, ReplicaConfig]:
    """
    Deserialize the flat JSON parameter object.

    Args:
        mapping: dict with any of the keys J, U, q, mu, N, L, n, T

    Returns:
        Validated (ModelParams, ReplicaConfig); absent keys keep their defaults
    """
    unknown = set(mapping) - set(PARAM_KEYS) - set(REPLICA_KEYS)
    if unknown:
        raise InvalidParameter(f"Unknown parameter keys: {sorted(unknown)}", field=sorted(unknown)[0])

    defaults = ModelParams()
    values = {f.name: mapping.get(f.name, getattr(defaults, f.name)) for f in fields(ModelParams)}
    params = validate(ModelParams(**values))
    replicas = replica_config(mapping.get("n", 2), mapping.get("T", 0.0))
    return params, replicas
