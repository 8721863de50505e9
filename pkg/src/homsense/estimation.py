"""Precision bounds, estimators, curve fitting and time-series filters."""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import hom, noise
from .errors import SingularInformationError
from .optics import OpticalParams

# Width convention used when quoting the per-photon precision bound: the
# amplitude standard deviation of the Gaussian probe profile, w_p/2.
# With it the bound coincides numerically with the ideal tilt-response
# width 1/(2 k w_p).
def beam_profile_sigma(params: OpticalParams) -> float:
    return params.w_p / 2.0


def cramer_rao_bound(nu, k: float, sigma: float):
    """Per-experiment lower bound on the tilt estimate's standard
    deviation, 1/(sqrt(nu) * 4 k sigma), for ``nu`` independent photons
    of wavenumber ``k`` and Gaussian profile width ``sigma``."""
    nu_arr = np.asarray(nu, dtype=np.float64)
    if np.any(nu_arr < 1):
        raise ValueError("nu must be >= 1")
    if not (k > 0 and sigma > 0):
        raise ValueError("k and sigma must be > 0")
    out = 1.0 / (np.sqrt(nu_arr) * 4.0 * k * sigma)
    return out if out.ndim else float(out)


def fisher_information_binary(p_of_theta: Callable, theta: float,
                              h: float = 1e-9) -> float:
    """Fisher information of a binary outcome with success probability
    p(theta), using a central finite difference of step ``h``:
    F = p'^2 / (p (1 - p))."""
    p = float(p_of_theta(theta))
    if not 0.0 < p < 1.0:
        raise SingularInformationError(
            f"outcome probability {p!r} at the boundary; information "
            "diverges")
    dp = (float(p_of_theta(theta + h)) - float(p_of_theta(theta - h))) / (2.0 * h)
    return dp * dp / (p * (1.0 - p))


def slope_estimator(delta_p_obs: float, theta_ref: float, model_slope: float,
                    delta_p_ref: float) -> float:
    """Linearized tilt estimate around the operating point:
    theta_ref + (delta_p_obs - delta_p_ref) / model_slope."""
    if model_slope == 0.0:
        raise ValueError("model_slope must be nonzero")
    return theta_ref + (delta_p_obs - delta_p_ref) / model_slope


# ---------------------------------------------------------------------------
# Weighted nonlinear least squares (damped Gauss-Newton)
# ---------------------------------------------------------------------------

_JACOBIAN_REL_STEP = 1e-6
_GRAD_TOL = 1e-10
_MAX_ITER = 200


@dataclass
class FitResult:
    names: tuple
    values: np.ndarray
    std_errors: np.ndarray
    residual_norm: float
    gradient_norm: float
    converged: bool
    iterations: int
    reason: str

    def as_dict(self) -> dict:
        return {
            "parameters": {n: float(v) for n, v in zip(self.names, self.values)},
            "std_errors": {n: float(e) for n, e in zip(self.names, self.std_errors)},
            "residual_norm": float(self.residual_norm),
            "gradient_norm": float(self.gradient_norm),
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
            "reason": self.reason,
        }


def _numeric_jacobian(model, x, p, scales):
    jac = np.empty((x.size, p.size))
    for j in range(p.size):
        step = _JACOBIAN_REL_STEP * max(abs(p[j]), scales[j])
        pp = p.copy()
        pm = p.copy()
        pp[j] += step
        pm[j] -= step
        jac[:, j] = (model(x, pp) - model(x, pm)) / (2.0 * step)
    return jac


def fit_least_squares(model: Callable, x, y, y_err, p0,
                      names: Sequence[str], scales=None,
                      max_iter: int = _MAX_ITER,
                      grad_tol: float = _GRAD_TOL) -> FitResult:
    """Minimize sum(((y - model(x, p)) / y_err)^2) by damped Gauss-Newton.

    Jacobians are central finite differences with relative step 1e-6;
    ``scales`` (per-parameter magnitude floors) keep the step meaningful
    for parameters passing through zero.  Convergence is declared when
    the weighted gradient drops below grad_tol relative to its natural
    scale ||J|| * ||r|| (reason "gradient_tolerance"), or when chi^2 can
    no longer decrease within double precision and the gradient sits at
    the sqrt(eps) * ||J|| * ||r|| level that floor permits (reason
    "progress_floor").  Other failure modes (iteration cap, singular or
    degenerate normal equations) are reported through ``converged`` and
    ``reason`` instead of raising.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    y_err = np.asarray(y_err, dtype=np.float64)
    if np.any(y_err <= 0):
        raise ValueError("y_err must be > 0")
    if x.size < len(p0) + 1:
        raise ValueError("need more points than parameters")

    sqw = 1.0 / y_err
    p = np.asarray(p0, dtype=np.float64).copy()
    if scales is None:
        scales = np.abs(p)
    scales = np.asarray(scales, dtype=np.float64).copy()
    fallback = float(np.max(scales)) if np.any(scales > 0) else 1.0
    scales[scales <= 0] = fallback
    lam = 1e-3
    reason = "max_iterations"
    converged = False
    iterations = 0
    grad_norm = math.inf

    resid = (y - model(x, p)) * sqw
    chi2 = float(resid @ resid)
    for iterations in range(1, max_iter + 1):
        jac = _numeric_jacobian(model, x, p, scales) * sqw[:, None]
        grad = jac.T @ resid
        grad_norm = float(np.max(np.abs(grad)))
        jscale = float(np.max(np.linalg.norm(jac, axis=0)))
        if grad_norm <= grad_tol * (1.0 + jscale * math.sqrt(chi2)):
            converged = True
            reason = "gradient_tolerance"
            break

        jtj = jac.T @ jac
        diag = np.diag(jtj).copy()
        if not np.all(np.isfinite(jtj)) or np.all(diag == 0.0):
            reason = "singular_jacobian"
            break
        diag[diag == 0.0] = np.min(diag[diag > 0.0]) if np.any(diag > 0) else 1.0

        stepped = False
        for _ in range(25):
            try:
                delta = np.linalg.solve(jtj + lam * np.diag(diag), grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            p_new = p + delta
            resid_new = (y - model(x, p_new)) * sqw
            chi2_new = float(resid_new @ resid_new)
            if np.isfinite(chi2_new) and chi2_new < chi2 - 1e-13 * chi2:
                p, resid, chi2 = p_new, resid_new, chi2_new
                lam = max(lam * 0.3, 1e-12)
                stepped = True
                break
            lam *= 10.0
        if not stepped:
            floor = (math.sqrt(np.finfo(float).eps)
                     * (1.0 + jscale * math.sqrt(chi2)) * 8.0)
            if grad_norm <= floor:
                converged = True
                reason = "progress_floor"
            else:
                reason = "stalled"
            break

    jac = _numeric_jacobian(model, x, p, scales) * sqw[:, None]
    grad_norm = float(np.max(np.abs(jac.T @ resid)))
    jtj = jac.T @ jac
    diag = np.diag(jtj)
    if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
        converged = False
        reason = "unidentifiable_parameters"
        std = np.full(p.size, math.nan)
    else:
        # condition the unit-diagonal matrix so parameter units cannot
        # masquerade as degeneracy
        d = np.sqrt(diag)
        scaled = jtj / np.outer(d, d)
        try:
            cond = np.linalg.cond(scaled)
            if not np.isfinite(cond) or cond > 1e12:
                converged = False
                reason = "ill_conditioned"
            cov = np.linalg.inv(scaled) / np.outer(d, d)
            std = np.sqrt(np.clip(np.diag(cov), 0.0, None))
        except np.linalg.LinAlgError:
            converged = False
            reason = "singular_normal_equations"
            std = np.full(p.size, math.nan)

    return FitResult(names=tuple(names), values=p, std_errors=std,
                     residual_norm=math.sqrt(chi2), gradient_norm=grad_norm,
                     converged=converged, iterations=iterations, reason=reason)


def _gaussian_model(x, p):
    a, x0, sigma, b = p
    return a * np.exp(-np.square(x - x0) / (2.0 * sigma ** 2)) + b


def _unpack_points(points):
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 2 and pts.shape[1] == 3:
        return pts[:, 0], pts[:, 1], pts[:, 2]
    if isinstance(points, (tuple, list)) and len(points) == 3:
        return (np.asarray(points[0], dtype=np.float64),
                np.asarray(points[1], dtype=np.float64),
                np.asarray(points[2], dtype=np.float64))
    raise ValueError("points must be an (n, 3) array or an (x, y, y_err) triple")


def fit_gaussian_dip(points, initial_guess=None, max_iter: int = _MAX_ITER,
                     grad_tol: float = _GRAD_TOL) -> FitResult:
    """Weighted fit of y = a exp(-(x - x0)^2 / (2 sigma^2)) + b.

    ``points`` is an (n, 3) array of (x, y, y_err) or an equivalent
    triple of arrays, n >= 5.  The returned sigma is reported positive.
    """
    x, y, y_err = _unpack_points(points)
    if x.size < 5:
        raise ValueError("need at least 5 points")
    if initial_guess is None:
        b0 = float(np.min(y))
        a0 = float(np.max(y) - b0)
        x0 = float(x[np.argmax(y)])
        weights = np.clip(y - b0, 0.0, None)
        wsum = float(weights.sum())
        if wsum > 0 and a0 > 0:
            sigma0 = math.sqrt(float((weights * np.square(x - x0)).sum()) / wsum)
        else:
            sigma0 = float(np.std(x)) or 1.0
        sigma0 = sigma0 or float(np.std(x)) or 1.0
        initial_guess = (a0, x0, sigma0, b0)
    x_scale = float(np.ptp(x)) or 1.0
    y_scale = float(np.ptp(y)) or 1.0
    result = fit_least_squares(_gaussian_model, x, y, y_err, initial_guess,
                               names=("amplitude", "center", "sigma", "offset"),
                               scales=(y_scale, x_scale, x_scale, y_scale),
                               max_iter=max_iter, grad_tol=grad_tol)
    result.values[2] = abs(result.values[2])
    return result


def _dip_model_factory(sign: float):
    def model(x, p):
        a, v, dl, x0 = p
        envelope = np.exp(-np.square(2.0 * math.pi * (x - x0)) / (2.0 * dl ** 2))
        return a * (1.0 + sign * v * envelope)
    return model


def fit_dip_counts(points, setting: hom.PolarizationSetting,
                   initial_guess=None, max_iter: int = _MAX_ITER,
                   grad_tol: float = _GRAD_TOL) -> FitResult:
    """Fit of the path-scan coincidence model
    C(delta) = a (1 +- v exp(-(2 pi (delta - x0))^2 / (2 dl^2))).

    The sign follows the :func:`homsense.hom.dip_counts` convention
    (SAME destructive).  Parameters: baseline a, visibility v, coherence
    length dl, dip center x0.
    """
    x, y, y_err = _unpack_points(points)
    if x.size < 5:
        raise ValueError("need at least 5 points")
    sign = -1.0 if setting is hom.PolarizationSetting.SAME else 1.0
    if initial_guess is None:
        a0 = float(np.median(y))
        extremum = np.argmin(y) if sign < 0 else np.argmax(y)
        x0 = float(x[extremum])
        v0 = min(0.999, max(0.05, abs(float(y[extremum]) - a0) / max(a0, 1e-30)))
        dl0 = 2.0 * math.pi * (float(np.std(x)) or 1.0) / 2.0
        initial_guess = (a0, v0, dl0, x0)
    x_scale = float(np.ptp(x)) or 1.0
    y_scale = float(np.ptp(y)) or 1.0
    result = fit_least_squares(_dip_model_factory(sign), x, y, y_err,
                               initial_guess,
                               names=("baseline", "visibility",
                                      "coherence_length", "center"),
                               scales=(y_scale, 1.0, x_scale, x_scale),
                               max_iter=max_iter, grad_tol=grad_tol)
    result.values[2] = abs(result.values[2])
    return result


# ---------------------------------------------------------------------------
# Time-series post-processing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FilteredSeries:
    t: np.ndarray
    y: np.ndarray
    counts: np.ndarray
    partial: np.ndarray


def mean_filter(t, y, window_seconds: float) -> FilteredSeries:
    """Non-overlapping window means.

    Windows start at the first timestamp; output timestamps are the
    nominal window centers.  A trailing window that the data does not
    fill completely is still emitted, flagged in ``partial``.
    """
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if t.size == 0:
        raise ValueError("series is empty")
    if window_seconds <= 0:
        raise ValueError("window_seconds must be > 0")
    spacing = float(np.median(np.diff(t))) if t.size > 1 else window_seconds
    if window_seconds < spacing:
        raise ValueError("window must cover at least one sample")

    idx = np.floor((t - t[0]) / window_seconds).astype(np.int64)
    n_windows = int(idx[-1]) + 1
    sums = np.bincount(idx, weights=y, minlength=n_windows)
    counts = np.bincount(idx, minlength=n_windows)
    if np.any(counts == 0):
        raise ValueError("window grid leaves gaps; shrink window_seconds")
    centers = t[0] + (np.arange(n_windows) + 0.5) * window_seconds
    partial = np.zeros(n_windows, dtype=bool)
    partial[-1] = t[0] + n_windows * window_seconds > t[-1] + 0.5 * spacing
    return FilteredSeries(t=centers, y=sums / counts, counts=counts,
                          partial=partial)


def stability_metric(y) -> tuple:
    """Standard deviation and maximum excursion of a series about its
    own full-record mean."""
    y = np.asarray(y, dtype=np.float64)
    if y.size < 2:
        raise ValueError("series must have at least 2 points")
    dev = y - y.mean()
    return float(np.std(dev, ddof=1)), float(np.max(np.abs(dev)))


# ---------------------------------------------------------------------------
# Monte-Carlo estimator characterization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EstimatorScenario:
    """Acquisition model for the Monte-Carlo estimator study.

    Each replicate draws one path-imbalance value from ``opl_process``
    (if any), evaluates the coincidence probabilities at the true tilt,
    and acquires ``n_trials`` binary pair outcomes; with ``shot_noise``
    off the noise-free probability difference is used directly.
    """

    params: OpticalParams = field(default_factory=OpticalParams)
    n_trials: int = 10_000
    theta_ref: Optional[float] = None
    opl_process: Optional[noise.OplProcess] = None
    shot_noise: bool = True

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")


@dataclass(frozen=True)
class EstimatorReport:
    theta_hat: float
    std: float
    crlb: float
    efficiency_ratio: float
    fisher_std: float
    n_trials: int
    n_photons: int
    replicates: int

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("theta_hat", "std", "crlb", "efficiency_ratio",
                 "fisher_std", "n_trials", "n_photons", "replicates")}


def monte_carlo_estimator_std(theta_true: float, scenario: EstimatorScenario,
                              replicates: int = 200, seed: int = 0,
                              index_base: int = 0) -> EstimatorReport:
    """Sample standard deviation of the linearized estimator over
    independent simulated acquisitions, against the precision bounds.

    ``crlb`` is the per-photon bound evaluated at nu = 2 * n_trials
    photons (two per pair); ``fisher_std`` is the attainable bound
    1/sqrt(n_trials * F) from the binary-outcome Fisher information at
    the operating point.
    """
    if replicates < 10:
        raise ValueError("replicates must be >= 10")
    params = scenario.params
    params.validate_theta(theta_true)
    theta_ref = theta_true if scenario.theta_ref is None else scenario.theta_ref
    paths_ref = hom.PathConfig.from_params(params)

    slope = float(hom.delta_p_slope(theta_ref, paths_ref, params))
    dp_ref = float(hom.delta_p(theta_ref, paths_ref, params))
    n = scenario.n_trials

    estimates = np.empty(replicates)
    for r in range(replicates):
        rng = noise.keyed_rng(seed, noise.STREAM_ESTIMATOR, index_base + r)
        dz = params.delta_z
        if scenario.opl_process is not None:
            dz = dz + noise.draw_opl_value(scenario.opl_process, rng)
        p_plus, _ = hom.bucket_pair_sweep(theta_true, dz, params.z_sm, params)
        if scenario.shot_noise:
            n_plus = int(rng.binomial(n, float(p_plus)))
            dp_obs = (2.0 * n_plus - n) / n
        else:
            dp_obs = 2.0 * float(p_plus) - 1.0
        estimates[r] = slope_estimator(dp_obs, theta_ref, slope, dp_ref)

    std = float(np.std(estimates, ddof=1))
    crlb = cramer_rao_bound(2 * n, params.k, beam_profile_sigma(params))

    def p_model(th):
        return hom.bucket_pair_sweep(th, params.delta_z, params.z_sm, params)[0]

    fisher = fisher_information_binary(p_model, theta_ref)
    fisher_std = 1.0 / math.sqrt(n * fisher)
    return EstimatorReport(theta_hat=float(estimates.mean()), std=std,
                           crlb=crlb,
                           efficiency_ratio=crlb / std if std > 0 else math.inf,
                           fisher_std=fisher_std, n_trials=n, n_photons=2 * n,
                           replicates=replicates)
