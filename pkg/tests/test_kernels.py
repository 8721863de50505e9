import numpy as np
import pytest

from homsense import _kernels_py, kernels
from homsense.optics import OpticalParams

try:
    from homsense import _kernels
    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False

P = OpticalParams()
CASES = [
    # theta, delta_z, z_sm
    (0.0, 0.0, 0.0),
    (1e-4, 0.0, 0.0),
    (P.tilt_width, 10 * P.wavelength, 0.5),
    (-4 * P.tilt_width, 100 * P.wavelength, 1.0),
    (9e-3, 8.1e-5, 0.2),
]


def _random_points(n=4096, seed=3):
    rng = np.random.default_rng(seed)
    q1 = rng.uniform(-2.5e6, 2.5e6, n)
    q2 = rng.uniform(-2.5e6, 2.5e6, n)
    return q1, q2


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernels not built")
@pytest.mark.parametrize("theta,delta_z,z_sm", CASES)
def test_compiled_matches_numpy_flat(theta, delta_z, z_sm):
    q1, q2 = _random_points()
    args = (theta, delta_z, z_sm, P.k, P.w_p, P.omega_c, 1.0)
    s_c, d_c = _kernels.coincidence_pair_flat(q1, q2, *args)
    s_p, d_p = _kernels_py.coincidence_pair_flat(q1, q2, *args)
    np.testing.assert_allclose(s_c, s_p, rtol=5e-12, atol=1e-300)
    np.testing.assert_allclose(d_c, d_p, rtol=5e-12, atol=1e-300)


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernels not built")
def test_compiled_matches_numpy_grid():
    q = np.linspace(-2.2e6, 2.2e6, 257)
    args = (P.tilt_width, P.wavelength, 0.3, P.k, P.w_p, P.omega_c, 2.0)
    s_c, d_c = _kernels.coincidence_pair_grid(q, q, *args)
    s_p, d_p = _kernels_py.coincidence_pair_grid(q, q, *args)
    np.testing.assert_allclose(s_c, s_p, rtol=5e-12, atol=1e-300)
    np.testing.assert_allclose(d_c, d_p, rtol=5e-12, atol=1e-300)


@pytest.mark.parametrize("impl", [_kernels_py]
                         + ([_kernels] if HAVE_COMPILED else []))
def test_grid_consistent_with_flat(impl):
    q_rows = np.linspace(-1e6, 1e6, 41)
    q_cols = np.linspace(-2e6, 2e6, 31)
    args = (2e-4, P.wavelength, 0.1, P.k, P.w_p, P.omega_c, 1.0)
    s_g, d_g = impl.coincidence_pair_grid(q_rows, q_cols, *args)
    Q1, Q2 = np.meshgrid(q_rows, q_cols, indexing="ij")
    s_f, d_f = impl.coincidence_pair_flat(
        np.ascontiguousarray(Q1.ravel()), np.ascontiguousarray(Q2.ravel()),
        *args)
    np.testing.assert_allclose(s_g.ravel(), s_f, rtol=1e-15)
    np.testing.assert_allclose(d_g.ravel(), d_f, rtol=1e-15)


@pytest.mark.parametrize("impl", [_kernels_py]
                         + ([_kernels] if HAVE_COMPILED else []))
def test_reference_value(impl):
    # same-branch density at the origin for a 100 urad tilt:
    # exp(-2 wp^2 k^2 th^2) * exp(-(2k th)^2 wc^2 / 2) = 0.74016957...
    s, d = impl.coincidence_pair_flat(np.array([0.0]), np.array([0.0]),
                                      1e-4, 0.0, 0.0, P.k, P.w_p, P.omega_c,
                                      1.0)
    assert s[0] == pytest.approx(0.7401695734461289, rel=1e-13)
    assert d[0] == pytest.approx(0.0, abs=1e-30)


@pytest.mark.parametrize("impl", [_kernels_py]
                         + ([_kernels] if HAVE_COMPILED else []))
def test_no_overflow_at_extremes(impl):
    # large q+ with a strong tilt drives sinh far past float range;
    # the envelope must still win
    q = np.array([4.0e6, -4.0e6, 1.0e7])
    s, d = impl.coincidence_pair_flat(q, q, 9e-3, 1e-4, 1.0,
                                      P.k, P.w_p, P.omega_c, 1.0)
    assert np.all(np.isfinite(s)) and np.all(np.isfinite(d))
    assert np.all(s >= 0) and np.all(d >= 0)
