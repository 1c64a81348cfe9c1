"""
Pytest configuration and shared fixtures for the service and command-line tests
"""

import math

import numpy as np
import pyarrow as pa
import pytest

from services.model_core import ModelParams


@pytest.fixture
def rng():
    """Fresh seeded generator per test so xdist workers never share state"""
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def saddle_couplings():
    """J, U used for the finite-time saddle checks"""
    return 1.0, 0.4


@pytest.fixture(scope="session")
def interior_thetas():
    """Angles strictly inside (0, pi/2)"""
    return [0.1, 0.45, 0.8, 1.2, 1.5]


@pytest.fixture(scope="session")
def half_pi():
    return math.pi / 2


@pytest.fixture
def desk_params():
    """Smallest chain the trajectory simulator accepts: 2 sites, 2 flavors"""
    return ModelParams(J=1.0, U=1.0, q=4, mu=1.0, N=2, L=2)


@pytest.fixture
def out_dir(tmp_path):
    """Output directory for command-line runs"""
    return tmp_path / "out"


def deserialize_arrow_file(path) -> pa.Table:
    """
    Read an Arrow IPC stream written by the command line.

    Args:
        path: path of the .arrow file

    Returns:
        PyArrow Table
    """
    reader = pa.ipc.open_stream(path.read_bytes())
    return reader.read_all()


@pytest.fixture(scope="session")
def arrow_deserializer():
    """Fixture that provides the Arrow deserialization function"""
    return deserialize_arrow_file
