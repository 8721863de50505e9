"""Scenario configuration, the five canonical experiments, and output
serialization.

Configs are strict JSON: unknown keys anywhere are rejected.  Every
output dataset embeds the fully resolved configuration and seed, so a
rerun with the same config and seed reproduces the file byte for byte.
"""

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import estimation, hom, noise, singlephoton
from .errors import ConfigError
from .optics import THETA_MAX, OpticalParams

EXPERIMENTS = ("hom-dip", "tilt-scan", "stability", "crlb", "wva")

_REQUIRED = object()


def _take(section: dict, key: str, default=_REQUIRED):
    if key in section:
        return section.pop(key)
    if default is _REQUIRED:
        raise ConfigError(f"missing required key '{key}'")
    return default


def _as_float(value, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{key}' must be a number, got {value!r}")
    out = float(value)
    if not math.isfinite(out):
        raise ConfigError(f"'{key}' must be finite, got {value!r}")
    return out


def _as_int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{key}' must be an integer, got {value!r}")
    return value


def _reject_unknown(section: dict, where: str) -> None:
    if section:
        raise ConfigError(f"unknown keys in {where}: {sorted(section)}")


@dataclass
class ScenarioConfig:
    experiment: str
    seed: int
    out_format: str
    out_path: Optional[str]
    params: OpticalParams
    counting: noise.CountingConfig
    process: noise.OplProcess
    section: dict = field(default_factory=dict)

    def provenance(self) -> dict:
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "params": {
                "wavelength_m": self.params.wavelength,
                "pump_width_m": self.params.w_p,
                "phase_matching_width_m": self.params.omega_c,
                "z_crystal_mirror_m": self.params.z_sm,
                "delta_z_m": self.params.delta_z,
            },
            "counting": {
                "pair_rate_cps": self.counting.pair_rate,
                "single_rate_cps": self.counting.single_rate,
                "bin_seconds": self.counting.bin_seconds,
                "efficiency": self.counting.efficiency,
            },
            "process": _process_to_dict(self.process),
            self.experiment.replace("-", "_"): dict(self.section),
        }


def _parse_params(section: dict) -> OpticalParams:
    try:
        params = OpticalParams(
            wavelength=_as_float(_take(section, "wavelength_m", 810e-9),
                                 "wavelength_m"),
            w_p=_as_float(_take(section, "pump_width_m", 0.5e-3),
                          "pump_width_m"),
            omega_c=_as_float(_take(section, "phase_matching_width_m", 4.0e-6),
                              "phase_matching_width_m"),
            z_sm=_as_float(_take(section, "z_crystal_mirror_m", 0.0),
                           "z_crystal_mirror_m"),
            delta_z=_as_float(_take(section, "delta_z_m", 0.0), "delta_z_m"),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid params: {exc}") from exc
    _reject_unknown(section, "params")
    return params


def _parse_counting(section: dict) -> noise.CountingConfig:
    try:
        counting = noise.CountingConfig(
            pair_rate=_as_float(_take(section, "pair_rate_cps", 25.0),
                                "pair_rate_cps"),
            single_rate=_as_float(_take(section, "single_rate_cps", 80000.0),
                                  "single_rate_cps"),
            bin_seconds=_as_float(_take(section, "bin_seconds", 8.0),
                                  "bin_seconds"),
            efficiency=_as_float(_take(section, "efficiency", 1.0),
                                 "efficiency"),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid counting: {exc}") from exc
    _reject_unknown(section, "counting")
    return counting


def _parse_process(section: dict) -> noise.OplProcess:
    kind = _take(section, "kind")
    try:
        if kind == "constant":
            process = noise.ConstantOpl(
                value=_as_float(_take(section, "value_m", 0.0), "value_m"))
        elif kind == "gaussian_jitter":
            process = noise.GaussianJitterOpl(
                sigma=_as_float(_take(section, "sigma_m"), "sigma_m"))
        elif kind == "random_walk":
            bound = _take(section, "bound_m", None)
            process = noise.RandomWalkOpl(
                step_sigma=_as_float(_take(section, "step_sigma_m"),
                                     "step_sigma_m"),
                bound=None if bound is None else _as_float(bound, "bound_m"))
        elif kind == "sinusoidal":
            process = noise.SinusoidalOpl(
                amplitude=_as_float(_take(section, "amplitude_m"),
                                    "amplitude_m"),
                period=_as_float(_take(section, "period_s"), "period_s"),
                phase=_as_float(_take(section, "phase_rad", 0.0), "phase_rad"))
        elif kind == "piecewise_drift":
            process = noise.PiecewiseDriftOpl(
                times=tuple(_take(section, "times_s")),
                values=tuple(_take(section, "values_m")))
        else:
            raise ConfigError(f"unknown process kind {kind!r}")
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid process: {exc}") from exc
    _reject_unknown(section, "process")
    return process


def _process_to_dict(process: noise.OplProcess) -> dict:
    if isinstance(process, noise.ConstantOpl):
        return {"kind": "constant", "value_m": process.value}
    if isinstance(process, noise.GaussianJitterOpl):
        return {"kind": "gaussian_jitter", "sigma_m": process.sigma}
    if isinstance(process, noise.RandomWalkOpl):
        return {"kind": "random_walk", "step_sigma_m": process.step_sigma,
                "bound_m": process.bound}
    if isinstance(process, noise.SinusoidalOpl):
        return {"kind": "sinusoidal", "amplitude_m": process.amplitude,
                "period_s": process.period, "phase_rad": process.phase}
    return {"kind": "piecewise_drift", "times_s": list(process.times),
            "values_m": list(process.values)}


def _check_theta(value: float, key: str) -> float:
    if abs(value) > THETA_MAX:
        raise ConfigError(f"'{key}' = {value!r} rad exceeds the "
                          f"{THETA_MAX} rad validity bound")
    return value


def _parse_section(experiment: str, section: dict,
                   params: OpticalParams) -> dict:
    s = params.tilt_width
    out = {}
    if experiment == "tilt-scan":
        theta_max = _take(section, "theta_max_rad", None)
        out["theta_max_rad"] = (4.0 * s if theta_max is None
                                else _check_theta(_as_float(theta_max, "theta_max_rad"),
                                                  "theta_max_rad"))
        out["steps"] = _as_int(_take(section, "steps", 81), "steps")
        out["point_seconds"] = _as_float(_take(section, "point_seconds", 10.0),
                                         "point_seconds")
    elif experiment == "hom-dip":
        out["delta_max_m"] = _as_float(_take(section, "delta_max_m", 1.0e-4),
                                       "delta_max_m")
        out["steps"] = _as_int(_take(section, "steps", 81), "steps")
        out["point_seconds"] = _as_float(_take(section, "point_seconds", 10.0),
                                         "point_seconds")
        out["visibility"] = _as_float(_take(section, "visibility", 0.96),
                                      "visibility")
        out["coherence_length_m"] = _as_float(
            _take(section, "coherence_length_m", 1.053e-4),
            "coherence_length_m")
    elif experiment == "stability":
        out["duration_s"] = _as_float(_take(section, "duration_s", 28800.0),
                                      "duration_s")
        theta_0 = _take(section, "theta_0_rad", None)
        out["theta_0_rad"] = (s if theta_0 is None
                              else _check_theta(_as_float(theta_0, "theta_0_rad"),
                                                "theta_0_rad"))
        out["filter_seconds"] = _as_float(_take(section, "filter_seconds", 600.0),
                                          "filter_seconds")
        out["sagnac_visibility"] = _as_float(
            _take(section, "sagnac_visibility", 1.0), "sagnac_visibility")
    elif experiment == "crlb":
        nu_grid = _take(section, "nu_grid", [100, 10_000, 1_000_000])
        if not isinstance(nu_grid, list) or not nu_grid:
            raise ConfigError("'nu_grid' must be a non-empty list")
        out["nu_grid"] = [_as_int(v, "nu_grid entry") for v in nu_grid]
        if any(v < 2 for v in out["nu_grid"]):
            raise ConfigError("'nu_grid' entries must be >= 2 photons")
        out["replicates"] = _as_int(_take(section, "replicates", 200),
                                    "replicates")
        theta_0 = _take(section, "theta_0_rad", None)
        out["theta_0_rad"] = (s if theta_0 is None
                              else _check_theta(_as_float(theta_0, "theta_0_rad"),
                                                "theta_0_rad"))
    elif experiment == "wva":
        out["phi_min_rad"] = _as_float(
            _take(section, "phi_min_rad", -math.pi / 50.0), "phi_min_rad")
        out["phi_max_rad"] = _as_float(
            _take(section, "phi_max_rad", math.pi / 50.0), "phi_max_rad")
        out["steps"] = _as_int(_take(section, "steps", 101), "steps")
        angle = _take(section, "postselection_angle_rad", None)
        out["postselection_angle_rad"] = (
            singlephoton.DEFAULT_POSTSELECTION_ANGLE if angle is None
            else _as_float(angle, "postselection_angle_rad"))
    else:
        raise ConfigError(f"unknown experiment {experiment!r}")

    if "steps" in out and out["steps"] < 1:
        raise ConfigError("'steps' must be >= 1")
    _reject_unknown(section, experiment)
    return out


_SECTION_KEYS = {"tilt-scan": "tilt_scan", "hom-dip": "hom_dip",
                 "stability": "stability", "crlb": "crlb", "wva": "wva"}


def parse_config(raw: dict, experiment: str, seed: int | None = None,
                 out_path: str | None = None,
                 out_format: str | None = None) -> ScenarioConfig:
    """Resolve a raw config dict (strict) plus CLI overrides."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    raw = {k: (dict(v) if isinstance(v, dict) else v) for k, v in raw.items()}

    declared = _take(raw, "experiment", experiment)
    if declared != experiment:
        raise ConfigError(f"config declares experiment {declared!r} but "
                          f"{experiment!r} was requested")

    cfg_seed = _take(raw, "seed", 0)
    if seed is not None:
        cfg_seed = seed
    if isinstance(cfg_seed, bool) or not isinstance(cfg_seed, int) \
            or not 0 <= cfg_seed < (1 << 64):
        raise ConfigError(f"'seed' must be an integer in [0, 2^64), "
                          f"got {cfg_seed!r}")

    output = _take(raw, "output", {})
    if not isinstance(output, dict):
        raise ConfigError("'output' must be an object")
    path = _take(output, "path", None)
    fmt = _take(output, "format", "csv")
    _reject_unknown(output, "output")
    if out_path is not None:
        path = out_path
    if out_format is not None:
        fmt = out_format
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output format must be 'csv' or 'json', got {fmt!r}")

    params = _parse_params(_take(raw, "params", {}))
    counting = _parse_counting(_take(raw, "counting", {}))

    process_raw = _take(raw, "process", None)
    if process_raw is None:
        if experiment == "stability":
            process = noise.SinusoidalOpl(amplitude=params.wavelength / 4.0,
                                          period=7200.0)
        else:
            process = noise.ConstantOpl(0.0)
    else:
        if not isinstance(process_raw, dict):
            raise ConfigError("'process' must be an object")
        process = _parse_process(process_raw)

    section_key = _SECTION_KEYS[experiment]
    section_raw = _take(raw, section_key, {})
    if not isinstance(section_raw, dict):
        raise ConfigError(f"'{section_key}' must be an object")
    section = _parse_section(experiment, section_raw, params)

    _reject_unknown(raw, "config")
    if path is None:
        path = f"{experiment}.{fmt}"
    return ScenarioConfig(experiment=experiment, seed=cfg_seed,
                          out_format=fmt, out_path=path, params=params,
                          counting=counting, process=process, section=section)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

@dataclass
class Dataset:
    experiment: str
    columns: list
    rows: list
    provenance: dict
    results: dict
    warnings: list


def _fit_summary(result: estimation.FitResult) -> dict:
    return result.as_dict()


def run_tilt_scan(cfg: ScenarioConfig) -> Dataset:
    """Probability difference versus tilt angle, with Gaussian fit and
    the linearized-estimator calibration at the maximum-slope point."""
    sec = cfg.section
    theta = np.linspace(-sec["theta_max_rad"], sec["theta_max_rad"],
                        sec["steps"])
    params = cfg.params
    p_plus, p_minus = hom.bucket_pair_sweep(theta, params.delta_z,
                                            params.z_sm, params)
    norm = cfg.counting.pair_rate * sec["point_seconds"]
    c_plus = np.empty(theta.size, dtype=np.int64)
    c_minus = np.empty(theta.size, dtype=np.int64)
    for i in range(theta.size):
        rng = noise.keyed_rng(cfg.seed, noise.STREAM_SCAN_COUNTS, i)
        c_plus[i], c_minus[i] = noise.draw_pair_counts(
            rng, norm, cfg.counting.efficiency, p_plus[i], p_minus[i])
    delta_p_norm = (c_plus - c_minus) / norm
    delta_p_model = p_plus - p_minus

    warnings = []
    y_err = np.full(theta.size, 1.0 / math.sqrt(norm))
    fit_counts = estimation.fit_gaussian_dip((theta, delta_p_norm, y_err))
    fit_model = estimation.fit_gaussian_dip(
        (theta, delta_p_model, np.ones(theta.size)))
    for tag, fit in (("counts", fit_counts), ("model", fit_model)):
        if not fit.converged:
            warnings.append(f"tilt-scan {tag} fit did not converge "
                            f"({fit.reason})")

    sigma_hat = float(fit_model.values[2])
    paths = hom.PathConfig.from_params(params)
    slope = float(hom.delta_p_slope(sigma_hat, paths, params))
    results = {
        "tilt_width_rad": params.tilt_width,
        "fit_counts": _fit_summary(fit_counts),
        "fit_model": _fit_summary(fit_model),
        "theta_max_sensitivity_rad": sigma_hat,
        "slope_at_max_sensitivity_per_rad": slope,
        "calibration_rad_per_unit_delta_p": 1.0 / abs(slope),
    }
    rows = [(float(theta[i]), float(p_plus[i]), float(p_minus[i]),
             int(c_plus[i]), int(c_minus[i]), float(delta_p_norm[i]))
            for i in range(theta.size)]
    return Dataset(experiment=cfg.experiment,
                   columns=["theta_rad", "p_plus_model", "p_minus_model",
                            "c_same", "c_diff", "delta_p_norm"],
                   rows=rows, provenance=cfg.provenance(), results=results,
                   warnings=warnings)


def run_hom_dip(cfg: ScenarioConfig) -> Dataset:
    """Coincidence dip along a longitudinal path scan, with fits of both
    polarization branches."""
    sec = cfg.section
    delta = np.linspace(-sec["delta_max_m"], sec["delta_max_m"], sec["steps"])
    amplitude = cfg.counting.pair_rate * sec["point_seconds"] / 2.0
    mu_same = hom.dip_counts(delta, amplitude, sec["visibility"],
                             sec["coherence_length_m"],
                             hom.PolarizationSetting.SAME)
    mu_diff = hom.dip_counts(delta, amplitude, sec["visibility"],
                             sec["coherence_length_m"],
                             hom.PolarizationSetting.DIFFERENT)
    c_same = np.empty(delta.size, dtype=np.int64)
    c_diff = np.empty(delta.size, dtype=np.int64)
    for i in range(delta.size):
        rng = noise.keyed_rng(cfg.seed, noise.STREAM_DIP_COUNTS, i)
        c_same[i] = noise.poisson_counts(float(mu_same[i]), rng)
        c_diff[i] = noise.poisson_counts(float(mu_diff[i]), rng)

    warnings = []
    results = {"amplitude_counts": amplitude}
    for label, counts, mu, setting in (
            ("same", c_same, mu_same, hom.PolarizationSetting.SAME),
            ("diff", c_diff, mu_diff, hom.PolarizationSetting.DIFFERENT)):
        y_err = np.sqrt(np.maximum(counts, 1.0))
        fit = estimation.fit_dip_counts((delta, counts.astype(float), y_err),
                                        setting)
        fit_model = estimation.fit_dip_counts(
            (delta, mu, np.ones(delta.size)), setting)
        if not fit.converged:
            warnings.append(f"hom-dip {label} fit did not converge "
                            f"({fit.reason})")
        results[f"fit_{label}"] = _fit_summary(fit)
        results[f"fit_model_{label}"] = _fit_summary(fit_model)

    rows = [(float(delta[i]), float(mu_same[i]), float(mu_diff[i]),
             int(c_same[i]), int(c_diff[i])) for i in range(delta.size)]
    return Dataset(experiment=cfg.experiment,
                   columns=["delta_m", "c_same_model", "c_diff_model",
                            "c_same", "c_diff"],
                   rows=rows, provenance=cfg.provenance(), results=results,
                   warnings=warnings)


def run_stability(cfg: ScenarioConfig) -> Dataset:
    """Long-run drift comparison of the two interferometers on the same
    path-length realization, plus a shot-noise-only reference."""
    sec = cfg.section
    theta_0 = sec["theta_0_rad"]
    params = cfg.params
    hom_series = noise.simulate_hom_series(
        theta_0, cfg.process, cfg.counting, params, sec["duration_s"],
        cfg.seed)
    model = singlephoton.SagnacModel.from_params(
        params, visibility=sec["sagnac_visibility"])
    sagnac_series = noise.simulate_sagnac_series(
        theta_0, cfg.process, cfg.counting, model, sec["duration_s"],
        cfg.seed)
    reference = noise.simulate_hom_series(
        theta_0, noise.ConstantOpl(0.0), cfg.counting, params,
        sec["duration_s"], cfg.seed,
        count_stream=noise.STREAM_REFERENCE_COUNTS)
    if not np.array_equal(hom_series.delta_z, sagnac_series.delta_z):
        raise AssertionError("interferometers must share the OPL realization")

    t = hom_series.t
    devs = {}
    filtered = {}
    for label, series in (("hom", hom_series), ("sagnac", sagnac_series),
                          ("poisson_ref", reference)):
        dp = series.delta_p
        devs[label] = dp - dp.mean()
    window = sec["filter_seconds"]
    broadcast = {}
    metrics = {}
    for label in ("hom", "sagnac"):
        filt = estimation.mean_filter(t, devs[label], window)
        filtered[label] = filt
        idx = np.floor((t - t[0]) / window).astype(np.int64)
        broadcast[label] = filt.y[idx]
        std, excursion = estimation.stability_metric(filt.y)
        metrics[label] = {"filtered_std": std,
                          "filtered_max_excursion": excursion}

    nu_bin_hom = cfg.counting.pair_rate * cfg.counting.bin_seconds
    nu_bin_sag = cfg.counting.single_rate * cfg.counting.bin_seconds
    bins_per_window = window / cfg.counting.bin_seconds
    results = {
        "theta_0_rad": theta_0,
        "metrics": metrics,
        "sagnac_to_hom_filtered_std_ratio":
            metrics["sagnac"]["filtered_std"] / metrics["hom"]["filtered_std"],
        "shot_noise_per_bin_hom": 1.0 / math.sqrt(nu_bin_hom),
        "shot_noise_per_bin_sagnac": 1.0 / math.sqrt(nu_bin_sag),
        "shot_noise_filtered_hom":
            1.0 / math.sqrt(nu_bin_hom * bins_per_window),
    }
    rows = [(float(t[i]), float(hom_series.delta_z[i]),
             float(devs["hom"][i]), float(devs["sagnac"][i]),
             float(devs["poisson_ref"][i]), float(broadcast["hom"][i]),
             float(broadcast["sagnac"][i])) for i in range(t.size)]
    return Dataset(experiment=cfg.experiment,
                   columns=["t_s", "delta_z_m", "dp_hom", "dp_sagnac",
                            "dp_poisson_ref", "dp_hom_filt",
                            "dp_sagnac_filt"],
                   rows=rows, provenance=cfg.provenance(), results=results,
                   warnings=[])


def run_crlb_study(cfg: ScenarioConfig) -> Dataset:
    """Precision bound versus photon number, with the Monte-Carlo
    standard deviation of the linearized estimator alongside."""
    sec = cfg.section
    theta_0 = sec["theta_0_rad"]
    params = cfg.params
    sigma = estimation.beam_profile_sigma(params)
    rows = []
    for row_index, nu in enumerate(sec["nu_grid"]):
        bound = estimation.cramer_rao_bound(nu, params.k, sigma)
        scenario = estimation.EstimatorScenario(params=params,
                                                n_trials=max(1, nu // 2))
        report = estimation.monte_carlo_estimator_std(
            theta_0, scenario, replicates=sec["replicates"], seed=cfg.seed,
            index_base=row_index * (1 << 24))
        rows.append((int(nu), float(bound), float(report.std),
                     float(report.fisher_std), float(report.efficiency_ratio),
                     float(report.theta_hat)))
    results = {"theta_0_rad": theta_0, "profile_sigma_m": sigma,
               "replicates": sec["replicates"]}
    return Dataset(experiment=cfg.experiment,
                   columns=["nu", "crlb_rad", "mc_std_rad", "fisher_std_rad",
                            "efficiency_ratio", "theta_hat_rad"],
                   rows=rows, provenance=cfg.provenance(), results=results,
                   warnings=[])


def run_wva_scan(cfg: ScenarioConfig) -> Dataset:
    """Amplification factor across a phase grid; singular post-selections
    become flagged rows."""
    sec = cfg.section
    grid = np.linspace(sec["phi_min_rad"], sec["phi_max_rad"], sec["steps"])
    points = singlephoton.wva_scan(grid, sec["postselection_angle_rad"])
    rows = []
    n_singular = 0
    for pt in points:
        re = im = math.nan
        if pt.amplification is not None:
            re = pt.amplification.real
            im = pt.amplification.imag
        n_singular += pt.singular
        rows.append((pt.phi, re, im, pt.magnitude, int(pt.singular)))
    results = {"postselection_angle_rad": sec["postselection_angle_rad"],
               "n_singular": n_singular}
    warnings = ([f"{n_singular} singular post-selection rows"]
                if n_singular else [])
    return Dataset(experiment=cfg.experiment,
                   columns=["phi_rad", "a_w_real", "a_w_imag", "a_w_abs",
                            "singular"],
                   rows=rows, provenance=cfg.provenance(), results=results,
                   warnings=warnings)


RUNNERS = {"tilt-scan": run_tilt_scan, "hom-dip": run_hom_dip,
           "stability": run_stability, "crlb": run_crlb_study,
           "wva": run_wva_scan}


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _plain(value):
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _header_payload(dataset: Dataset) -> dict:
    return _plain({"provenance": dataset.provenance,
                   "results": dataset.results,
                   "warnings": dataset.warnings})


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return repr(float(value))


def write_csv(dataset: Dataset, path: str) -> None:
    """RFC-4180 CSV with a '#'-prefixed JSON provenance header line."""
    header = json.dumps(_header_payload(dataset), sort_keys=True,
                        separators=(",", ":"))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("# " + header + "\r\n")
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(dataset.columns)
        for row in dataset.rows:
            writer.writerow([_format_cell(v) for v in row])


def write_json(dataset: Dataset, path: str) -> None:
    payload = _header_payload(dataset)
    payload["columns"] = list(dataset.columns)
    payload["rows"] = [[_plain(v) for v in row] for row in dataset.rows]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_dataset(dataset: Dataset, path: str, fmt: str) -> None:
    if fmt == "csv":
        write_csv(dataset, path)
    elif fmt == "json":
        write_json(dataset, path)
    else:
        raise ConfigError(f"unknown output format {fmt!r}")
