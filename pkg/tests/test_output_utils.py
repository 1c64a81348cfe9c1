import argparse
import json

import numpy as np
import pandas as pd
import pyarrow.parquet as pq
import pytest

import config
from utils import arrow_utils
from utils.exceptions import ConfigFileError
from utils.output_utils import (
    RunManifest,
    get_param,
    load_config_file,
    parse_float_list,
    write_csv,
    write_json,
    write_result,
)


# =============================================================================
# PARAMETER LOOKUP
# =============================================================================

def test_flag_beats_file_beats_default():
    flags = argparse.Namespace(mu=0.7, U=None)
    file_values = {"mu": 0.2, "U": 0.5}
    assert get_param("mu", flags, file_values, 1.0) == 0.7
    assert get_param("U", flags, file_values, 1.0) == 0.5
    assert get_param("J", flags, file_values, 1.0) == 1.0


def test_load_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"mu": 0.3, "points": 5}))
    assert load_config_file(str(path)) == {"mu": 0.3, "points": 5}
    assert load_config_file(None) == {}


@pytest.mark.parametrize("content", ["{not json", "[1, 2]"])
def test_load_config_file_rejects_bad_content(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    with pytest.raises(ConfigFileError):
        load_config_file(str(path))


def test_load_config_file_missing(tmp_path):
    with pytest.raises(ConfigFileError):
        load_config_file(str(tmp_path / "absent.json"))


def test_parse_float_list():
    assert parse_float_list("0.2, 0.5,1") == [0.2, 0.5, 1.0]
    assert parse_float_list([1, 2]) == [1.0, 2.0]
    assert parse_float_list(0.4) == [0.4]
    assert parse_float_list(None) == []


# =============================================================================
# TABLES
# =============================================================================

def test_csv_round_trips_floats(tmp_path):
    frame = pd.DataFrame({"theta": [0.1, np.pi / 3], "sigma": [1 / 3, 2 / 7]})
    path = write_csv(frame, tmp_path / "table.csv")
    loaded = pd.read_csv(path, float_precision="round_trip")
    assert list(loaded.columns) == ["theta", "sigma"]
    np.testing.assert_array_equal(loaded.to_numpy(), frame.to_numpy())


def test_csv_is_byte_stable(tmp_path):
    frame = pd.DataFrame({"t": np.linspace(0, 1, 7), "x": np.sin(np.linspace(0, 1, 7))})
    first = write_csv(frame, tmp_path / "a.csv").read_bytes()
    second = write_csv(frame, tmp_path / "b.csv").read_bytes()
    assert first == second
    assert b"\r\n" not in first


def test_pinned_schema_is_used_when_columns_match():
    frame = pd.DataFrame({"lambda": [0.1], "density": [2.0]})
    assert arrow_utils.schema_for("spectrum", frame) == arrow_utils.SCHEMAS["spectrum"]
    scan = pd.DataFrame({"mu": [0.1], "lambda_1": [0.9], "theta_1": [0.1], "class": ["volume-law"]})
    assert arrow_utils.schema_for("phase_diagram", scan).names == ["mu", "lambda_1", "theta_1", "class"]


def test_write_result_formats(tmp_path, arrow_deserializer):
    frame = pd.DataFrame({"lambda": [0.1, 0.2], "density": [2.0, 3.0]})
    assert [p.name for p in write_result(frame, tmp_path, "spectrum", "csv")] == ["spectrum.csv"]

    paths = write_result(frame, tmp_path, "spectrum", "arrow")
    assert [p.name for p in paths] == ["spectrum.csv", "spectrum.arrow"]
    assert arrow_deserializer(paths[1]).column("density").to_pylist() == [2.0, 3.0]

    paths = write_result(frame, tmp_path, "spectrum", "parquet")
    assert pq.read_table(paths[1]).schema.equals(arrow_utils.SCHEMAS["spectrum"])


def test_write_table_unknown_format(tmp_path):
    frame = pd.DataFrame({"a": [1.0]})
    with pytest.raises(ValueError):
        arrow_utils.write_table(frame, "a", tmp_path / "a.csv", "xlsx")


# =============================================================================
# MANIFEST
# =============================================================================

def test_manifest_contents(tmp_path):
    manifest = RunManifest(command="spectrum", parameters={"N": 8}, seed=3)
    manifest.add_outputs([tmp_path / "spectrum.csv"])
    manifest.finish("ok")
    path = manifest.write(tmp_path)
    assert path.name == config.MANIFEST_NAME
    payload = json.loads(path.read_text())
    assert payload["command"] == "spectrum"
    assert payload["status"] == "ok"
    assert payload["seed"] == 3
    assert payload["tool_version"] == config.TOOL_VERSION
    assert payload["outputs"] == [str(tmp_path / "spectrum.csv")]
    assert payload["wall_time"] >= 0.0
    assert "started" not in payload


def test_write_json_is_sorted(tmp_path):
    path = write_json({"b": 1, "a": 2}, tmp_path / "x.json")
    assert path.read_text().index('"a"') < path.read_text().index('"b"')
