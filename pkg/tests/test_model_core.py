import math

import pytest

from services import model_core
from services.model_core import ModelParams
from utils.exceptions import InvalidParameter


def test_validate_returns_same_instance():
    params = ModelParams(J=1.0, U=0.5, q=4, mu=0.3, N=8, L=2)
    assert model_core.validate(params) is params
    # idempotent
    assert model_core.validate(model_core.validate(params)) is params


@pytest.mark.parametrize("overrides, field, fragment", [
    ({"q": 6}, "q", "q must be multiple of 4"),
    ({"q": 0}, "q", "q must be multiple of 4"),
    ({"N": 7}, "N", "N must be even"),
    ({"J": -1.0}, "J", "J must be >= 0"),
    ({"mu": -0.1}, "mu", "mu must be >= 0"),
    ({"L": 0}, "L", "L must be >= 1"),
    ({"J": 0.0, "U": 0.0}, "J", "J + U must be positive"),
    ({"J": float("nan")}, "J", "finite"),
    ({"N": True}, "N", "integer"),
])
def test_validate_names_failing_field(overrides, field, fragment):
    with pytest.raises(InvalidParameter) as excinfo:
        model_core.validate(ModelParams(**overrides))
    assert excinfo.value.field == field
    assert fragment in str(excinfo.value)


def test_saddle_angle_endpoints():
    assert model_core.saddle_angle(1.0, 0.0).theta == 0.0
    # exactly pi/2, not atan2 round-off
    assert model_core.saddle_angle(0.0, 0.7).theta == math.pi / 2
    assert model_core.saddle_angle(1.0, 1.0).theta == pytest.approx(math.pi / 4, rel=1e-15)
    with pytest.raises(InvalidParameter):
        model_core.saddle_angle(0.0, 0.0)


def test_saddle_angle_is_monotone_in_mu():
    thetas = [model_core.saddle_angle(0.8, mu).theta for mu in (0.0, 0.1, 0.5, 2.0, 10.0)]
    assert thetas == sorted(thetas)
    assert all(0.0 <= theta <= math.pi / 2 for theta in thetas)


def test_measurement_strength_continuum_relation():
    assert model_core.measurement_strength(2.0, 0.05) == pytest.approx(math.sqrt(0.1))
    with pytest.raises(InvalidParameter):
        model_core.measurement_strength(1.0, 0.0)


def test_replica_config_accepts_real_order():
    replicas = model_core.replica_config(1.5, 2.0)
    assert replicas.n == 1.5 and replicas.T == 2.0
    with pytest.raises(InvalidParameter):
        model_core.replica_config(0.0)
    with pytest.raises(InvalidParameter):
        model_core.replica_config(2, -1.0)


def test_params_from_mapping_defaults_and_unknown_keys():
    params, replicas = model_core.params_from_mapping({"U": 0.4, "N": 4.0, "n": 3})
    assert params.U == 0.4
    assert params.N == 4
    assert params.J == 1.0
    assert replicas.n == 3
    assert params.to_dict()["U"] == 0.4

    with pytest.raises(InvalidParameter) as excinfo:
        model_core.params_from_mapping({"beta": 1.0})
    assert excinfo.value.field == "beta"
