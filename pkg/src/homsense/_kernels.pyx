# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled coincidence-density kernels (see _kernels_py for the math)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sin, cos, sinh, fabs, fmin

cnp.import_array()

cdef double _SINH_CUTOFF = 700.0


cdef inline void _point(double qp, double qm, double theta, double delta_z,
                        double z_sm, double k, double w2, double oc2,
                        double a2b2, double *same, double *diff) noexcept nogil:
    cdef double shift = 2.0 * k * theta
    cdef double da = qp - shift
    cdef double db = qp + shift
    cdef double a = 0.5 * w2 * da * da
    cdef double b = 0.5 * w2 * db * db
    cdef double dg = qm - shift
    cdef double gam2 = exp(-0.5 * oc2 * dg * dg)
    cdef double gt = exp(-0.5 * (a + b))
    cdef double y = 2.0 * qp * w2 * k * theta
    cdef double x = qp * qm * delta_z / (2.0 * k) + 2.0 * qp * z_sm * theta
    cdef double t, sh, cx, sx
    if fabs(y) < _SINH_CUTOFF:
        sh = sinh(0.5 * y)
        t = gt * sh * sh
    else:
        t = 0.25 * exp(-fmin(a, b))
    cx = cos(0.5 * x)
    sx = sin(0.5 * x)
    same[0] = a2b2 * gam2 * (t + gt * cx * cx)
    diff[0] = a2b2 * gam2 * (t + gt * sx * sx)


def coincidence_pair_flat(double[::1] q1, double[::1] q2, double theta,
                          double delta_z, double z_sm, double k, double w_p,
                          double omega_c, double a2b2):
    """Element-wise density for both polarization branches (1-D arrays)."""
    cdef Py_ssize_t n = q1.shape[0]
    if q2.shape[0] != n:
        raise ValueError("q1 and q2 must have equal length")
    same = np.empty(n, dtype=np.float64)
    diff = np.empty(n, dtype=np.float64)
    cdef double[::1] sv = same
    cdef double[::1] dv = diff
    cdef double w2 = w_p * w_p
    cdef double oc2 = omega_c * omega_c
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            _point(q1[i] + q2[i], q1[i] - q2[i], theta, delta_z, z_sm,
                   k, w2, oc2, a2b2, &sv[i], &dv[i])
    return same, diff


def coincidence_pair_grid(double[::1] q_rows, double[::1] q_cols, double theta,
                          double delta_z, double z_sm, double k, double w_p,
                          double omega_c, double a2b2):
    """Density for both branches on the tensor grid q_rows x q_cols."""
    cdef Py_ssize_t nr = q_rows.shape[0]
    cdef Py_ssize_t nc = q_cols.shape[0]
    same = np.empty((nr, nc), dtype=np.float64)
    diff = np.empty((nr, nc), dtype=np.float64)
    cdef double[:, ::1] sv = same
    cdef double[:, ::1] dv = diff
    cdef double w2 = w_p * w_p
    cdef double oc2 = omega_c * omega_c
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(nr):
            for j in range(nc):
                _point(q_rows[i] + q_cols[j], q_rows[i] - q_cols[j], theta,
                       delta_z, z_sm, k, w2, oc2, a2b2, &sv[i, j], &dv[i, j])
    return same, diff
