"""Single-photon interferometer baselines.

The polarization-resolved Sagnac probability with its explicit phase
dependence, the phase-averaged visibility, and the weak-value
amplification factor.  These are the references against which the
two-photon model's phase robustness is judged.
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import PostSelectionError
from .optics import OpticalParams, beam_width_at

OVERLAP_FLOOR = 1e-15

# Post-selection angle used in the amplification-factor scan: just past
# orthogonality with the phase-free input state (|H> - |V>)/sqrt(2).
DEFAULT_POSTSELECTION_ANGLE = (1.0 + 1.0 / 80.0) * math.pi / 4.0


@dataclass(frozen=True)
class SagnacModel:
    """Polarization-Sagnac response model.

    ``f_form`` is the tilt-response function; the default
    exp(-2 k_beam^2 w_beam^2 theta^2) makes the ideal interferometer
    match the balanced two-photon response and saturate the single-photon
    precision bound.  The interferometer phase is tied to path-length
    fluctuation through phi = k_beam * delta_z.
    """

    k_beam: float
    w_beam: float
    visibility: float = 1.0
    f_form: Optional[Callable] = field(default=None)

    def __post_init__(self):
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError(f"visibility must lie in [0, 1], got {self.visibility}")
        if not (self.k_beam > 0 and self.w_beam > 0):
            raise ValueError("k_beam and w_beam must be > 0")

    @classmethod
    def from_params(cls, params: OpticalParams, visibility: float = 1.0,
                    z: float | None = None) -> "SagnacModel":
        """Probe beam matched to the pump at the mirror: wavenumber k and
        width w_p(z), with z defaulting to ``params.z_sm``."""
        z = params.z_sm if z is None else z
        return cls(k_beam=params.k, w_beam=float(beam_width_at(params, z)),
                   visibility=visibility)

    def f(self, theta):
        if self.f_form is not None:
            return self.f_form(theta)
        return np.exp(-2.0 * self.k_beam ** 2 * self.w_beam ** 2
                      * np.square(theta))

    def phase_from_opl(self, delta_z):
        return self.k_beam * np.asarray(delta_z, dtype=np.float64)


def sagnac_pair(theta, phi, model: SagnacModel):
    """Output-polarization probabilities (p_plus, p_minus).

    p_plus = (1 + V f(theta) cos phi)/2; the pair sums to 1 exactly.
    """
    x = model.visibility * model.f(theta) * np.cos(np.asarray(phi, dtype=np.float64))
    p_plus = 0.5 * (1.0 + x)
    return p_plus, 1.0 - p_plus


def sagnac_probability(theta, phi, model: SagnacModel, sign: int = +1):
    """One branch of :func:`sagnac_pair` (``sign`` is +1 or -1)."""
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    p_plus, p_minus = sagnac_pair(theta, phi, model)
    return p_plus if sign > 0 else p_minus


# ---------------------------------------------------------------------------
# Phase-averaged visibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointPhase:
    value: float = 0.0


@dataclass(frozen=True)
class GaussianPhase:
    std: float
    mean: float = 0.0

    def __post_init__(self):
        if self.std < 0:
            raise ValueError("std must be >= 0")


@dataclass(frozen=True)
class UniformPhase:
    half_width: float
    center: float = 0.0

    def __post_init__(self):
        if self.half_width < 0:
            raise ValueError("half_width must be >= 0")


@dataclass(frozen=True)
class EmpiricalPhase:
    samples: Sequence[float]

    def __post_init__(self):
        if len(self.samples) == 0:
            raise ValueError("empirical phase sample must be non-empty")


def _mean_cos(dist) -> float:
    if isinstance(dist, PointPhase):
        return math.cos(dist.value)
    if isinstance(dist, GaussianPhase):
        return math.cos(dist.mean) * math.exp(-0.5 * dist.std ** 2)
    if isinstance(dist, UniformPhase):
        if dist.half_width == 0.0:
            return math.cos(dist.center)
        return math.cos(dist.center) * math.sin(dist.half_width) / dist.half_width
    if isinstance(dist, EmpiricalPhase):
        return float(np.mean(np.cos(np.asarray(dist.samples, dtype=np.float64))))
    raise TypeError(f"unsupported phase distribution: {type(dist).__name__}")


def averaged_visibility(visibility: float, phase_dist) -> float:
    """Fringe visibility after averaging over a fluctuating phase,
    V * E[cos phi].  Never exceeds V in magnitude."""
    return visibility * _mean_cos(phase_dist)


# ---------------------------------------------------------------------------
# Weak-value amplification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolarizationState:
    """Pure polarization state c_h |H> + c_v |V>, unit norm."""

    c_h: complex
    c_v: complex

    def __post_init__(self):
        norm = abs(self.c_h) ** 2 + abs(self.c_v) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state norm^2 = {norm!r} deviates from 1 "
                             "by more than 1e-12")


def wva_input_state(phi: float = 0.0) -> PolarizationState:
    """(|H> - e^{i phi} |V>)/sqrt(2): antidiagonal up to the phase kick."""
    r = 1.0 / math.sqrt(2.0)
    return PolarizationState(c_h=r, c_v=-r * cmath.exp(1j * phi))


def wva_postselection_state(angle: float) -> PolarizationState:
    return PolarizationState(c_h=math.cos(angle), c_v=math.sin(angle))


def weak_value_amplification(psi_i: PolarizationState,
                             psi_ps: PolarizationState) -> complex:
    """Amplification factor <psi_ps|sigma_z|psi_i> / <psi_ps|psi_i>.

    sigma_z = diag(+1, -1) in the {H, V} basis.  Raises
    :class:`PostSelectionError` when the post-selection overlap is below
    ``OVERLAP_FLOOR``.
    """
    term_h = psi_ps.c_h.conjugate() * psi_i.c_h
    term_v = psi_ps.c_v.conjugate() * psi_i.c_v
    overlap = term_h + term_v
    if abs(overlap) <= OVERLAP_FLOOR:
        raise PostSelectionError(
            f"post-selection overlap {abs(overlap):.3e} below "
            f"{OVERLAP_FLOOR:.0e}; amplification factor diverges")
    return (term_h - term_v) / overlap


@dataclass(frozen=True)
class WvaPoint:
    phi: float
    amplification: Optional[complex]
    magnitude: float
    singular: bool


def wva_scan(phi_grid, theta_ps: float = DEFAULT_POSTSELECTION_ANGLE):
    """Tabulate the amplification factor over a phase grid.

    The input state is (|H> - e^{i phi}|V>)/sqrt(2) and the post-selected
    state cos(theta_ps)|H> + sin(theta_ps)|V>.  Singular points become
    flagged rows, not failures.
    """
    psi_ps = wva_postselection_state(theta_ps)
    rows = []
    for phi in np.asarray(phi_grid, dtype=np.float64):
        try:
            a_w = weak_value_amplification(wva_input_state(float(phi)), psi_ps)
        except PostSelectionError:
            rows.append(WvaPoint(phi=float(phi), amplification=None,
                                 magnitude=math.nan, singular=True))
        else:
            rows.append(WvaPoint(phi=float(phi), amplification=a_w,
                                 magnitude=abs(a_w), singular=False))
    return rows
