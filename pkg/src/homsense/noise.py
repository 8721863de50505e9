"""Stochastic path-length processes and photon-counting simulation.

Turns the ideal interferometer probabilities into simulated experimental
records: a path-length fluctuation process drives both interferometers,
detected events follow Poisson statistics, and detection inefficiency
thins photon pairs quadratically but single photons only linearly.

All randomness flows through counter-based Philox streams keyed by
(seed, stream id, index), so any bin of any record can be regenerated
independently and results do not depend on execution order.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import hom, singlephoton
from .optics import OpticalParams

# Stream ids for the keyed Philox generators.
STREAM_OPL = 0
STREAM_HOM_COUNTS = 1
STREAM_SAGNAC_COUNTS = 2
STREAM_REFERENCE_COUNTS = 3
STREAM_ESTIMATOR = 4
STREAM_DIP_COUNTS = 5
STREAM_SCAN_COUNTS = 6

_MASK64 = (1 << 64) - 1
_MASK48 = (1 << 48) - 1


def keyed_rng(seed: int, stream: int, index: int = 0) -> np.random.Generator:
    """Philox generator keyed by (seed, stream, index).

    Streams with distinct keys are statistically independent, which makes
    per-bin draws reproducible regardless of how the simulation is
    parallelized or chunked.
    """
    if not 0 <= stream < (1 << 16):
        raise ValueError(f"stream must fit in 16 bits, got {stream}")
    if not 0 <= index <= _MASK48:
        raise ValueError(f"index must fit in 48 bits, got {index}")
    key = np.array([int(seed) & _MASK64, (stream << 48) | index],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


# ---------------------------------------------------------------------------
# Path-length (OPL) fluctuation processes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantOpl:
    value: float = 0.0


@dataclass(frozen=True)
class GaussianJitterOpl:
    """Independent Gaussian draw of the path imbalance at every sample."""

    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")


@dataclass(frozen=True)
class RandomWalkOpl:
    """Cumulative Gaussian steps, optionally reflected at +-bound."""

    step_sigma: float
    bound: float | None = None

    def __post_init__(self):
        if self.step_sigma < 0:
            raise ValueError("step_sigma must be >= 0")
        if self.bound is not None and self.bound <= 0:
            raise ValueError("bound must be > 0 when set")


@dataclass(frozen=True)
class SinusoidalOpl:
    amplitude: float
    period: float
    phase: float = 0.0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("amplitude must be >= 0")
        if self.period <= 0:
            raise ValueError("period must be > 0")


@dataclass(frozen=True)
class PiecewiseDriftOpl:
    """Piecewise-linear drift through (time, value) breakpoints."""

    times: Sequence[float]
    values: Sequence[float]

    def __post_init__(self):
        if len(self.times) != len(self.values) or len(self.times) == 0:
            raise ValueError("times and values must be equal-length, non-empty")
        if np.any(np.diff(np.asarray(self.times, dtype=np.float64)) <= 0):
            raise ValueError("breakpoint times must be strictly increasing")


OplProcess = Union[ConstantOpl, GaussianJitterOpl, RandomWalkOpl,
                   SinusoidalOpl, PiecewiseDriftOpl]


def _reflect(x, bound):
    # Triangle-wave fold of the unconstrained walk, the standard mapping
    # for reflecting boundaries at +-bound.
    m = np.mod(x + bound, 4.0 * bound)
    return np.where(m > 2.0 * bound, 4.0 * bound - m, m) - bound


def sample_opl_path(process: OplProcess, t_grid, seed: int) -> np.ndarray:
    """One realization of delta_z(t) on ``t_grid``.

    Deterministic for fixed (process, t_grid, seed); random processes draw
    from the STREAM_OPL stream of ``seed``.
    """
    t = np.asarray(t_grid, dtype=np.float64)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t_grid must be a non-empty 1-D sequence")
    if np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be strictly increasing")

    if isinstance(process, ConstantOpl):
        return np.full(t.size, process.value, dtype=np.float64)
    if isinstance(process, SinusoidalOpl):
        return process.amplitude * np.sin(2.0 * math.pi * t / process.period
                                          + process.phase)
    if isinstance(process, PiecewiseDriftOpl):
        return np.interp(t, np.asarray(process.times, dtype=np.float64),
                         np.asarray(process.values, dtype=np.float64))

    rng = keyed_rng(seed, STREAM_OPL)
    if isinstance(process, GaussianJitterOpl):
        return rng.normal(0.0, process.sigma, size=t.size)
    if isinstance(process, RandomWalkOpl):
        walk = np.cumsum(rng.normal(0.0, process.step_sigma, size=t.size))
        if process.bound is not None:
            walk = _reflect(walk, process.bound)
        return walk
    raise TypeError(f"unsupported OPL process: {type(process).__name__}")


def draw_opl_value(process: OplProcess, rng: np.random.Generator,
                   t: float = 0.0) -> float:
    """Single draw of the path imbalance (per-replicate jitter)."""
    if isinstance(process, ConstantOpl):
        return process.value
    if isinstance(process, SinusoidalOpl):
        return process.amplitude * math.sin(2.0 * math.pi * t / process.period
                                            + process.phase)
    if isinstance(process, PiecewiseDriftOpl):
        return float(np.interp(t, process.times, process.values))
    if isinstance(process, GaussianJitterOpl):
        return float(rng.normal(0.0, process.sigma))
    if isinstance(process, RandomWalkOpl):
        value = float(rng.normal(0.0, process.step_sigma))
        if process.bound is not None:
            value = float(_reflect(np.asarray(value), process.bound))
        return value
    raise TypeError(f"unsupported OPL process: {type(process).__name__}")


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountingConfig:
    """Detected count rates and binning.

    ``pair_rate`` is the total detected coincidence rate (both
    polarization channels summed), ``single_rate`` the total detected
    single-photon rate; both are post-efficiency, so the generated rates
    are pair_rate/eta^2 and single_rate/eta.
    """

    pair_rate: float = 25.0
    single_rate: float = 80000.0
    bin_seconds: float = 8.0
    efficiency: float = 1.0

    def __post_init__(self):
        if self.pair_rate < 0 or self.single_rate < 0:
            raise ValueError("rates must be >= 0")
        if self.bin_seconds <= 0:
            raise ValueError("bin_seconds must be > 0")
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError("efficiency must lie in (0, 1]")


def poisson_counts(expected: float, rng: np.random.Generator) -> int:
    """Poisson-distributed integer count with the given mean."""
    if not (math.isfinite(expected) and expected >= 0.0):
        raise ValueError(f"expected count must be finite and >= 0, "
                         f"got {expected}")
    return int(rng.poisson(expected))


@dataclass(frozen=True)
class CountSeries:
    """Timestamped two-channel count record.

    ``c_plus`` / ``c_minus`` hold the counts of the branch carrying the
    plus / minus sign of the interference term (same/different
    polarization projections for coincidences, +/- output polarizations
    for singles); ``mu_plus`` / ``mu_minus`` the corresponding noise-free
    expectations.  ``norm`` is the zero-tilt calibration denominator used
    to normalize probabilities.  ``delta_z`` is the shared fluctuation
    realization; a nominal arm imbalance enters the probabilities but not
    this column, so records driven by the same process and seed carry
    identical columns.
    """

    kind: str
    t: np.ndarray
    delta_z: np.ndarray
    c_plus: np.ndarray
    c_minus: np.ndarray
    mu_plus: np.ndarray
    mu_minus: np.ndarray
    norm: float
    generated_rate: float

    def __post_init__(self):
        n = self.t.size
        for name in ("delta_z", "c_plus", "c_minus", "mu_plus", "mu_minus"):
            if getattr(self, name).size != n:
                raise ValueError(f"{name} length mismatch")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("timestamps must be strictly increasing")
        for name in ("c_plus", "c_minus"):
            counts = getattr(self, name)
            if not np.issubdtype(counts.dtype, np.integer) or np.any(counts < 0):
                raise ValueError(f"{name} must hold non-negative integers")

    # HOM-flavored aliases
    @property
    def c_same(self):
        return self.c_plus

    @property
    def c_diff(self):
        return self.c_minus

    # Sagnac-flavored aliases
    @property
    def n_plus(self):
        return self.c_plus

    @property
    def n_minus(self):
        return self.c_minus

    @property
    def p_plus(self):
        return self.c_plus / self.norm

    @property
    def p_minus(self):
        return self.c_minus / self.norm

    @property
    def delta_p(self):
        """Normalized probability difference per bin."""
        return (self.c_plus - self.c_minus) / self.norm

    @property
    def delta_p_model(self):
        """Noise-free probability difference per bin."""
        return (self.mu_plus - self.mu_minus) / self.norm


def _bin_centers(duration: float, bin_seconds: float) -> np.ndarray:
    n_bins = int(duration // bin_seconds)
    if n_bins < 1:
        raise ValueError("duration must cover at least one bin")
    return (np.arange(n_bins) + 0.5) * bin_seconds


def _split_counts(rng, n_generated: int, detect_prob: float, p_plus: float,
                  p_minus: float):
    # Each generated event independently lands in (detected plus,
    # detected minus, undetected); by Poisson splitting the channel
    # marginals are Poisson with the detected means.
    pvals = [detect_prob * p_plus, detect_prob * p_minus, 0.0]
    pvals[2] = max(0.0, 1.0 - pvals[0] - pvals[1])
    plus, minus, _ = rng.multinomial(n_generated, pvals)
    return int(plus), int(minus)


def draw_pair_counts(rng: np.random.Generator, detected_mean_total: float,
                     efficiency: float, p_plus: float, p_minus: float):
    """Detected counts in both channels for one acquisition bin.

    Pairs are generated at rate detected_mean_total/efficiency^2 and each
    survives detection with probability efficiency^2, then lands in a
    channel according to (p_plus, p_minus).
    """
    eta2 = efficiency ** 2
    n_gen = rng.poisson(detected_mean_total / eta2)
    return _split_counts(rng, n_gen, eta2, p_plus, p_minus)


def simulate_hom_series(theta_0: float, process: OplProcess,
                        counting: CountingConfig, params: OpticalParams,
                        duration: float, seed: int,
                        count_stream: int = STREAM_HOM_COUNTS) -> CountSeries:
    """Simulated coincidence record at a fixed operating tilt.

    Per bin, the path imbalance is taken from the process realization,
    the closed-form bucket probabilities are evaluated at ``theta_0``,
    generated pairs (rate pair_rate/eta^2) are Poisson-drawn and thinned
    event-by-event with survival probability eta^2.  The expected SAME
    counts at theta = 0 equal pair_rate * bin_seconds by construction.
    """
    params.validate_theta(theta_0)
    t = _bin_centers(duration, counting.bin_seconds)
    dz = sample_opl_path(process, t, seed)
    p_plus, p_minus = hom.bucket_pair_sweep(theta_0, params.delta_z + dz,
                                            params.z_sm, params)

    eta2 = counting.efficiency ** 2
    detected_per_bin = counting.pair_rate * counting.bin_seconds
    generated_rate = counting.pair_rate / eta2
    mu_plus = detected_per_bin * p_plus
    mu_minus = detected_per_bin * p_minus

    c_plus = np.empty(t.size, dtype=np.int64)
    c_minus = np.empty(t.size, dtype=np.int64)
    for i in range(t.size):
        rng = keyed_rng(seed, count_stream, i)
        c_plus[i], c_minus[i] = draw_pair_counts(
            rng, detected_per_bin, counting.efficiency, p_plus[i], p_minus[i])

    return CountSeries(kind="hom", t=t, delta_z=dz, c_plus=c_plus,
                       c_minus=c_minus, mu_plus=mu_plus, mu_minus=mu_minus,
                       norm=detected_per_bin, generated_rate=generated_rate)


def simulate_sagnac_series(theta_0: float, process: OplProcess,
                           counting: CountingConfig,
                           model: singlephoton.SagnacModel, duration: float,
                           seed: int,
                           count_stream: int = STREAM_SAGNAC_COUNTS) -> CountSeries:
    """Simulated single-count record of the Sagnac baseline.

    Shares the OPL stream with :func:`simulate_hom_series`: for equal
    (process, duration, seed) both records see the identical delta_z(t)
    realization.  The phase is phi(t) = k_beam * delta_z(t); single
    photons are thinned linearly in the efficiency.
    """
    t = _bin_centers(duration, counting.bin_seconds)
    dz = sample_opl_path(process, t, seed)
    phi = model.phase_from_opl(dz)
    p_plus, p_minus = singlephoton.sagnac_pair(theta_0, phi, model)

    eta = counting.efficiency
    detected_per_bin = counting.single_rate * counting.bin_seconds
    generated_rate = counting.single_rate / eta
    mu_plus = detected_per_bin * p_plus
    mu_minus = detected_per_bin * p_minus

    c_plus = np.empty(t.size, dtype=np.int64)
    c_minus = np.empty(t.size, dtype=np.int64)
    for i in range(t.size):
        rng = keyed_rng(seed, count_stream, i)
        n_gen = rng.poisson(generated_rate * counting.bin_seconds)
        c_plus[i], c_minus[i] = _split_counts(rng, n_gen, eta,
                                              p_plus[i], p_minus[i])

    return CountSeries(kind="sagnac", t=t, delta_z=dz, c_plus=c_plus,
                       c_minus=c_minus, mu_plus=mu_plus, mu_minus=mu_minus,
                       norm=detected_per_bin, generated_rate=generated_rate)
