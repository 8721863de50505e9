"""Physical parameters, SPDC pair amplitude and elementary transformations.

Everything downstream (interferometer models, noise simulation, the
estimation layer) consumes the types and helpers defined here.  All
lengths are in meters, angles in radians, transverse wavenumbers in
rad/m.
"""

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import NumericError, ValidityError

# Desk defaults: 810 nm degenerate down-conversion, 0.5 mm pump waist,
# 4 um phase-matching width.
DEFAULT_WAVELENGTH = 810e-9
DEFAULT_PUMP_WIDTH = 0.5e-3
DEFAULT_PHASE_MATCHING_WIDTH = 4.0e-6

# All closed forms are first order in the tilt angle.
THETA_MAX = 10e-3

DEFAULT_QUAD_POINTS = 401
_QUAD_BLOCK_ROWS = 256


@dataclass(frozen=True)
class OpticalParams:
    """Wavelengths, beam widths and nominal geometry of the setup.

    Parameters
    ----------
    wavelength : float
        Wavelength of the down-converted photons (m).
    w_p : float
        Transverse amplitude width of the Gaussian pump beam (m).
    omega_c : float
        Characteristic width of the phase-matching function (m).
    z_sm : float
        Optical path length from the crystal to the tilting mirror (m).
    delta_z : float
        Nominal path-length difference between the idler and signal
        arms (m).
    """

    wavelength: float = DEFAULT_WAVELENGTH
    w_p: float = DEFAULT_PUMP_WIDTH
    omega_c: float = DEFAULT_PHASE_MATCHING_WIDTH
    z_sm: float = 0.0
    delta_z: float = 0.0

    def __post_init__(self):
        for name in ("wavelength", "w_p", "omega_c"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value}")
        for name in ("z_sm", "delta_z"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def k(self) -> float:
        """Photon wavenumber 2*pi/wavelength (rad/m)."""
        return 2.0 * math.pi / self.wavelength

    @property
    def k_p(self) -> float:
        """Pump wavenumber, exactly twice the photon wavenumber (rad/m)."""
        return 2.0 * self.k

    @property
    def tilt_width(self) -> float:
        """Gaussian width of the ideal tilt response, 1/(2 k w_p) (rad)."""
        return 1.0 / (2.0 * self.k * self.w_p)

    def validate_theta(self, theta) -> None:
        """Reject tilt angles outside the first-order validity range.

        Requires |theta| <= 10 mrad and |2 k theta| * omega_c < 1.
        """
        t = np.max(np.abs(np.asarray(theta, dtype=np.float64)))
        if not np.isfinite(t):
            raise ValidityError("tilt angle must be finite")
        if t > THETA_MAX:
            raise ValidityError(
                f"|theta| = {t:.3e} rad exceeds the {THETA_MAX} rad "
                "small-angle bound")
        if 2.0 * self.k * t * self.omega_c >= 1.0:
            raise ValidityError(
                f"|2 k theta| * omega_c = {2 * self.k * t * self.omega_c:.3f}"
                " >= 1 violates the paraxial assumption")

    def with_overrides(self, **kwargs) -> "OpticalParams":
        return replace(self, **kwargs)


def beam_width_at(params: OpticalParams, z: float):
    """Pump amplitude width after free propagation over a distance z.

    w(z) = sqrt(w_p^2 + z^2 / (k^2 w_p^2)).
    """
    return np.sqrt(params.w_p ** 2 + np.square(z) / (params.k ** 2 * params.w_p ** 2))


@dataclass(frozen=True)
class BiphotonAmplitude:
    """Momentum-space pair amplitude v(q_i + q_s) * gamma(q_i - q_s).

    ``a`` and ``b`` are the (real, positive) normalization coefficients of
    the pump spectrum and phase-matching Gaussians.  The default
    :meth:`unit_norm` choice gives each factor unit L2 norm; downstream
    probabilities are ratio-normalized, so the choice cancels there.
    """

    params: OpticalParams
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("normalization coefficients must be positive")

    @classmethod
    def unit_norm(cls, params: OpticalParams) -> "BiphotonAmplitude":
        a = (params.w_p / math.sqrt(2.0 * math.pi)) ** 0.5
        b = (params.omega_c / math.sqrt(2.0 * math.pi)) ** 0.5
        return cls(params=params, a=a, b=b)

    def value(self, q_i, q_s):
        return (pump_spectrum(np.asarray(q_i) + np.asarray(q_s), self.params, self.a)
                * phase_matching(np.asarray(q_i) - np.asarray(q_s), self.params, self.b))

    def __call__(self, q_i, q_s):
        return self.value(q_i, q_s)


def _check_finite(name, value):
    arr = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"non-finite {name}", location=name)
    return arr


def pump_spectrum(q, params: OpticalParams, a: float | None = None):
    """Gaussian angular spectrum of the pump, a * exp(-q^2 w_p^2 / 4)."""
    q = _check_finite("q", q)
    if a is None:
        a = BiphotonAmplitude.unit_norm(params).a
    return a * np.exp(-np.square(q) * params.w_p ** 2 / 4.0)


def phase_matching(q, params: OpticalParams, b: float | None = None):
    """Gaussian phase-matching function, b * exp(-q^2 omega_c^2 / 4)."""
    q = _check_finite("q", q)
    if b is None:
        b = BiphotonAmplitude.unit_norm(params).b
    return b * np.exp(-np.square(q) * params.omega_c ** 2 / 4.0)


def biphoton_value(q_i, q_s, amp: BiphotonAmplitude):
    """Pair amplitude v(q_i + q_s) * gamma(q_i - q_s)."""
    return amp.value(_check_finite("q_i", q_i), _check_finite("q_s", q_s))


def tilt_shift(q_s, theta: float, params: OpticalParams):
    """Signal-photon transverse wavenumber after reflection off the
    mirror tilted by ``theta``: q_s + 2 k theta."""
    params.validate_theta(theta)
    q_s = _check_finite("q_s", q_s)
    return q_s + 2.0 * params.k * theta


def gauss_quadrature_2d(f: Callable, half_width: float,
                        n_points: int = DEFAULT_QUAD_POINTS) -> float:
    """Tensor-product trapezoid estimate of the integral of ``f`` over
    the square [-half_width, half_width]^2.

    ``f`` must accept broadcastable numpy arrays (q1, q2) and return the
    integrand values.  A uniform grid is used; for Gaussian-class
    integrands the trapezoid rule converges at spectral rate once the
    spacing resolves the narrowest feature, so ``n_points`` must be
    chosen with the integrand's width in mind.

    Raises
    ------
    NumericError
        If any integrand sample is non-finite (the location of the first
        offending sample is reported).
    """
    if not (half_width > 0 and math.isfinite(half_width)):
        raise ValueError(f"half_width must be finite and > 0, got {half_width}")
    if n_points < 51:
        raise ValueError(f"n_points must be >= 51, got {n_points}")

    q = np.linspace(-half_width, half_width, n_points)
    w = np.full(n_points, q[1] - q[0])
    w[0] *= 0.5
    w[-1] *= 0.5

    total = 0.0
    for i0 in range(0, n_points, _QUAD_BLOCK_ROWS):
        i1 = min(i0 + _QUAD_BLOCK_ROWS, n_points)
        values = np.asarray(f(q[i0:i1, None], q[None, :]), dtype=np.float64)
        if values.shape != (i1 - i0, n_points):
            values = np.broadcast_to(values, (i1 - i0, n_points))
        bad = ~np.isfinite(values)
        if bad.any():
            bi, bj = np.argwhere(bad)[0]
            raise NumericError(
                f"non-finite integrand sample at q1={q[i0 + bi]!r}, "
                f"q2={q[bj]!r}",
                location=(float(q[i0 + bi]), float(q[bj])))
        total += float(np.einsum("i,j,ij->", w[i0:i1], w, values))
    return total
