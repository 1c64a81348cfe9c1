"""
End-to-end runs of the command line through cli.main
"""

import json
import math

import pandas as pd
import pytest

import cli
import config
from services import verification


def _manifest(out_dir):
    return json.loads((out_dir / config.MANIFEST_NAME).read_text())


# =============================================================================
# EXIT CODES
# =============================================================================

@pytest.mark.integration
def test_unknown_command_is_usage_error():
    assert cli.main(["no-such-command"]) == 2


@pytest.mark.integration
def test_invalid_parameter_exits_two_with_manifest(out_dir):
    code = cli.main(["phase-diagram", "--q", "6", "--mus", "0.5", "--out", str(out_dir)])
    assert code == 2
    manifest = _manifest(out_dir)
    assert manifest["status"] == "error"
    assert manifest["outputs"] == []


@pytest.mark.integration
def test_missing_config_file_exits_two(out_dir, tmp_path):
    code = cli.main(["entropy-curve", "--config", str(tmp_path / "absent.json"), "--out", str(out_dir)])
    assert code == 2


@pytest.mark.integration
def test_verify_passes(out_dir):
    assert cli.main(["verify", "--suite", "permutations", "--out", str(out_dir)]) == 0
    reports = json.loads((out_dir / "verify.json").read_text())
    assert reports[0]["suite"] == "permutations"
    assert reports[0]["failed"] == 0
    assert _manifest(out_dir)["status"] == "ok"


@pytest.mark.integration
def test_verify_failure_exits_one(out_dir, monkeypatch):
    def broken():
        report = verification.SuiteReport("permutations")
        report.require("always fails", False)
        return report

    monkeypatch.setitem(verification.SUITES, "permutations", broken)
    assert cli.main(["verify", "--suite", "permutations", "--out", str(out_dir)]) == 1
    manifest = _manifest(out_dir)
    assert manifest["status"] == "verification-failed"
    assert manifest["outputs"] == [str(out_dir / "verify.json")]


# =============================================================================
# SUBCOMMANDS
# =============================================================================

@pytest.mark.integration
def test_entropy_curve_endpoints(out_dir):
    assert cli.main(["entropy-curve", "--points", "11", "--out", str(out_dir)]) == 0
    table = pd.read_csv(out_dir / "entropy_curve.csv")
    assert list(table.columns) == ["theta", "sigma"]
    assert len(table) == 11
    assert table["theta"].iloc[0] == 0.0
    assert table["sigma"].iloc[0] == pytest.approx(2 * math.log(2), rel=1e-12)
    assert table["theta"].iloc[-1] == pytest.approx(math.pi / 2, rel=1e-15)
    assert table["sigma"].iloc[-1] == 0.0


@pytest.mark.integration
def test_entropy_curve_is_byte_identical(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    for out in (first, second):
        assert cli.main(["entropy-curve", "--points", "9", "--orders", "2,3", "--N", "4", "--out", str(out)]) == 0
    assert (first / "entropy_curve.csv").read_bytes() == (second / "entropy_curve.csv").read_bytes()
    assert list(pd.read_csv(first / "entropy_curve.csv").columns) == ["theta", "sigma", "S_n_2", "S_n_3"]


@pytest.mark.integration
def test_flags_override_config_file(out_dir, tmp_path):
    settings = tmp_path / "run.json"
    settings.write_text(json.dumps({"points": 5}))
    assert cli.main(["entropy-curve", "--config", str(settings), "--out", str(out_dir)]) == 0
    assert len(pd.read_csv(out_dir / "entropy_curve.csv")) == 5
    assert cli.main(["entropy-curve", "--config", str(settings), "--points", "7", "--out", str(out_dir)]) == 0
    assert len(pd.read_csv(out_dir / "entropy_curve.csv")) == 7


@pytest.mark.integration
def test_phase_diagram(out_dir):
    assert cli.main(["phase-diagram", "--U", "1.0", "--mus", "0.5,1.05,1.5", "--out", str(out_dir)]) == 0
    table = pd.read_csv(out_dir / "phase_diagram.csv")
    assert list(table["class"]) == ["volume-law", "coexistence-window", "area-law"]
    transition = json.loads((out_dir / "transition.json").read_text())
    assert transition["kind"] == "first-order"
    assert transition["mu_c"] == pytest.approx(4 * math.sqrt(6) / 9, rel=1e-10)


@pytest.mark.integration
def test_spectrum(out_dir, arrow_deserializer):
    assert cli.main(["spectrum", "--N", "6", "--max-moment", "4", "--format", "arrow", "--out", str(out_dir)]) == 0
    moments = pd.read_csv(out_dir / "spectrum_moments.csv")
    pd.testing.assert_series_equal(moments["quadrature"], moments["closed_form"], rtol=1e-9, check_names=False)
    table = arrow_deserializer(out_dir / "spectrum.arrow")
    assert table.column_names == ["lambda", "density"]


@pytest.mark.integration
def test_quasi_entropy_with_decomposition(out_dir):
    assert cli.main(["quasi-entropy", "--orders", "2,3", "--theta", "0.7", "--N", "4", "--out", str(out_dir)]) == 0
    table = pd.read_csv(out_dir / "quasi_entropy.csv")
    assert list(table["order"]) == [2, 3]
    saddles = json.loads((out_dir / "quasi_entropy_saddles.json").read_text())
    assert len(saddles["3"]["saddles"]) == 5


@pytest.mark.integration
def test_simulate_is_seeded(tmp_path):
    args = ["simulate", "--mus", "0.5,1.5", "--steps", "3", "--n-traj", "3", "--seed", "9"]
    first, second = tmp_path / "a", tmp_path / "b"
    assert cli.main(args + ["--out", str(first)]) == 0
    assert cli.main(args + ["--out", str(second)]) == 0
    assert (first / "simulate.csv").read_bytes() == (second / "simulate.csv").read_bytes()
    table = pd.read_csv(first / "simulate.csv")
    assert list(table.columns) == ["mu", "t", "mean_entropy", "stderr"]
    assert len(table) == 8
    assert _manifest(first)["seed"] == 9


@pytest.mark.integration
@pytest.mark.slow
def test_saddle_ode(out_dir):
    assert cli.main(["saddle-ode", "--T", "4", "--points", "201", "--out", str(out_dir)]) == 0
    summary = json.loads((out_dir / "saddle_summary.json").read_text())
    assert summary["elliptic_branch"] == "sn2"
    assert summary["t0"] == pytest.approx(0.22122, abs=1e-5)
    assert summary["invariant_drift"] < 1e-8
    closed = pd.read_csv(out_dir / "saddle_closed_form.csv")
    assert len(closed) == 201
    assert closed["x2"].iloc[0] == pytest.approx(-1.0, abs=1e-6)
