import json
import math
import subprocess
import sys

import numpy as np
import pytest

from homsense import scenarios
from homsense.errors import ConfigError

TILT_COLUMNS = ["theta_rad", "p_plus_model", "p_minus_model", "c_same",
                "c_diff", "delta_p_norm"]
STABILITY_COLUMNS = ["t_s", "delta_z_m", "dp_hom", "dp_sagnac",
                     "dp_poisson_ref", "dp_hom_filt", "dp_sagnac_filt"]


def _run(args, cwd):
    return subprocess.run([sys.executable, "-m", "homsense.cli", *args],
                          cwd=cwd, capture_output=True, text=True)


def _write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def _read_csv(path):
    lines = path.read_bytes().decode("utf-8").split("\r\n")
    assert lines[0].startswith("# ")
    header_payload = json.loads(lines[0][2:])
    columns = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:] if line]
    return header_payload, columns, rows


SHORT_STABILITY = {"stability": {"duration_s": 1600.0},
                   "process": {"kind": "sinusoidal", "amplitude_m": 2.025e-7,
                               "period_s": 800.0}}


class TestParseConfig:
    def test_defaults_resolve(self):
        cfg = scenarios.parse_config({}, "tilt-scan")
        assert cfg.seed == 0
        assert cfg.section["steps"] == 81
        assert cfg.section["theta_max_rad"] == \
            pytest.approx(4 * cfg.params.tilt_width)

    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="unknown keys"):
            scenarios.parse_config({"sede": 1}, "tilt-scan")

    def test_unknown_nested_key(self):
        with pytest.raises(ConfigError, match="params"):
            scenarios.parse_config({"params": {"wavelength": 1.0}},
                                   "tilt-scan")

    def test_experiment_mismatch(self):
        with pytest.raises(ConfigError, match="declares"):
            scenarios.parse_config({"experiment": "wva"}, "tilt-scan")

    def test_bad_types_rejected(self):
        with pytest.raises(ConfigError):
            scenarios.parse_config({"seed": "abc"}, "wva")
        with pytest.raises(ConfigError):
            scenarios.parse_config({"counting": {"pair_rate_cps": True}},
                                   "tilt-scan")

    def test_theta_grid_bound(self):
        with pytest.raises(ConfigError, match="validity"):
            scenarios.parse_config(
                {"tilt_scan": {"theta_max_rad": 0.05}}, "tilt-scan")

    def test_process_kinds_round_trip(self):
        for spec in (
                {"kind": "constant", "value_m": 1e-9},
                {"kind": "gaussian_jitter", "sigma_m": 1e-9},
                {"kind": "random_walk", "step_sigma_m": 1e-9, "bound_m": 1e-7},
                {"kind": "sinusoidal", "amplitude_m": 1e-7, "period_s": 60.0},
                {"kind": "piecewise_drift", "times_s": [0.0, 1.0],
                 "values_m": [0.0, 1e-8]}):
            cfg = scenarios.parse_config({"process": dict(spec)}, "stability")
            recovered = scenarios._process_to_dict(cfg.process)
            for key, value in spec.items():
                assert recovered[key] == value

    def test_unknown_process_kind(self):
        with pytest.raises(ConfigError, match="process"):
            scenarios.parse_config({"process": {"kind": "brownian"}},
                                   "stability")


class TestCliRuns:
    def test_tilt_scan_csv(self, tmp_path):
        result = _run(["tilt-scan", "--seed", "7", "--out", "scan.csv"],
                      cwd=tmp_path)
        assert result.returncode == 0, result.stderr
        payload, columns, rows = _read_csv(tmp_path / "scan.csv")
        assert columns == TILT_COLUMNS
        assert len(rows) == 81
        assert payload["provenance"]["seed"] == 7
        assert payload["results"]["fit_model"]["parameters"]["sigma"] == \
            pytest.approx(1.2891550390443522e-4, rel=1e-6)

    def test_stability_columns(self, tmp_path):
        config = _write_config(tmp_path, SHORT_STABILITY)
        result = _run(["stability", "--config", config, "--out", "st.csv"],
                      cwd=tmp_path)
        assert result.returncode == 0, result.stderr
        payload, columns, rows = _read_csv(tmp_path / "st.csv")
        assert columns == STABILITY_COLUMNS
        assert len(rows) == 200
        assert "sagnac_to_hom_filtered_std_ratio" in payload["results"]

    def test_hom_dip_json(self, tmp_path):
        result = _run(["hom-dip", "--format", "json", "--out", "dip.json"],
                      cwd=tmp_path)
        assert result.returncode == 0, result.stderr
        payload = json.loads((tmp_path / "dip.json").read_text())
        assert payload["columns"] == ["delta_m", "c_same_model",
                                      "c_diff_model", "c_same", "c_diff"]
        fit = payload["results"]["fit_diff"]
        for name, truth in (("visibility", 0.96),
                            ("coherence_length", 1.053e-4)):
            estimate = fit["parameters"][name]
            band = 3 * fit["std_errors"][name]
            assert abs(estimate - truth) < band
        model_fit = payload["results"]["fit_model_diff"]["parameters"]
        assert model_fit["visibility"] == pytest.approx(0.96, rel=1e-6)
        assert model_fit["coherence_length"] == pytest.approx(1.053e-4,
                                                              rel=1e-6)

    def test_crlb_bound_column(self, tmp_path):
        config = _write_config(tmp_path, {
            "crlb": {"nu_grid": [100, 10000], "replicates": 50}})
        result = _run(["crlb", "--config", config, "--out", "crlb.csv"],
                      cwd=tmp_path)
        assert result.returncode == 0, result.stderr
        _, columns, rows = _read_csv(tmp_path / "crlb.csv")
        k = 7757018.897752576
        sigma = 0.5e-3 / 2
        for row in rows:
            nu = int(row[columns.index("nu")])
            bound = float(row[columns.index("crlb_rad")])
            assert bound == 1.0 / (math.sqrt(nu) * 4 * k * sigma)

    def test_wva_scan_values(self, tmp_path):
        result = _run(["wva", "--out", "wva.csv"], cwd=tmp_path)
        assert result.returncode == 0, result.stderr
        _, columns, rows = _read_csv(tmp_path / "wva.csv")
        phis = np.array([float(r[0]) for r in rows])
        mags = np.array([float(r[columns.index("a_w_abs")]) for r in rows])
        i_zero = int(np.argmin(np.abs(phis)))
        assert mags[i_zero] == pytest.approx(101.85589106543827, rel=1e-9)

    def test_missing_config_file(self, tmp_path):
        result = _run(["wva", "--config", "absent.json"], cwd=tmp_path)
        assert result.returncode == 2

    def test_unknown_key_exits_2(self, tmp_path):
        config = _write_config(tmp_path, {"tilt_scan": {"stepz": 3}})
        result = _run(["tilt-scan", "--config", config], cwd=tmp_path)
        assert result.returncode == 2
        assert "stepz" in result.stderr

    def test_numeric_failure_exits_3(self, tmp_path):
        # arm imbalance far outside the closed-form regime
        config = _write_config(tmp_path, {"params": {"delta_z_m": 0.01}})
        result = _run(["tilt-scan", "--config", config], cwd=tmp_path)
        assert result.returncode == 3
        assert "numeric failure" in result.stderr

    def test_warnings_keep_exit_zero(self, tmp_path):
        # starved counts give a degenerate fit: warn, still exit 0
        config = _write_config(tmp_path, {
            "counting": {"pair_rate_cps": 0.001},
            "tilt_scan": {"steps": 11}})
        result = _run(["tilt-scan", "--config", config, "--out", "w.csv"],
                      cwd=tmp_path)
        assert result.returncode == 0, result.stderr
        payload, _, _ = _read_csv(tmp_path / "w.csv")
        assert payload["warnings"]
        assert "warning" in result.stderr


class TestDeterminism:
    @pytest.mark.parametrize("experiment,extra", [
        ("tilt-scan", {}),
        ("stability", SHORT_STABILITY),
        ("wva", {}),
        ("hom-dip", {}),
        ("crlb", {"crlb": {"nu_grid": [100], "replicates": 20}}),
    ])
    def test_byte_identical_reruns(self, tmp_path, experiment, extra):
        config = _write_config(tmp_path, extra)
        for name in ("a.csv", "b.csv"):
            result = _run([experiment, "--config", config, "--seed", "99",
                           "--out", name], cwd=tmp_path)
            assert result.returncode == 0, result.stderr
        assert (tmp_path / "a.csv").read_bytes() == \
            (tmp_path / "b.csv").read_bytes()

    def test_seed_changes_output(self, tmp_path):
        for name, seed in (("a.csv", "1"), ("b.csv", "2")):
            _run(["tilt-scan", "--seed", seed, "--out", name], cwd=tmp_path)
        assert (tmp_path / "a.csv").read_bytes() != \
            (tmp_path / "b.csv").read_bytes()
