"""Pure-numpy implementation of the coincidence-density kernels.

The compiled extension ``homsense._kernels`` provides the same two entry
points; :mod:`homsense.kernels` picks whichever is importable.  Both
backends evaluate the double-Gaussian pair-coincidence density

    rho_pm = A^2 B^2 * exp(-(q- - 2k*theta)^2 wc^2 / 2)
             * [ Gt*sinh^2(y/2) + Gt*{cos^2|sin^2}(x/2) ]

with q+- = q1 +- q2, Gt = exp(-(a+b)/2), a,b = (q+ -+ 2k*theta)^2 wp^2/2,
y = 2 q+ wp^2 k theta and x = q+ q- dz/(2k) + 2 q+ z_sm theta.  This is
algebraically identical to the textbook form
(1/2)*A^2B^2*v^2(q+)*g^2(q- - 2k th)*exp(-2 wp^2 k^2 th^2)*{cosh y +- cos x}
but stays finite for arbitrarily large |y| and avoids the catastrophic
cancellation of cosh-cos near the destructive zero.
"""

import numpy as np

# sinh(y/2)^2 stays inside float64 for |y| < _SINH_CUTOFF; beyond it the
# product Gt*sinh^2(y/2) collapses to exp(-min(a, b))/4 to >300 digits.
_SINH_CUTOFF = 700.0


def _branches(qp, qm, theta, delta_z, z_sm, k, w_p, omega_c):
    w2 = w_p * w_p
    oc2 = omega_c * omega_c
    shift = 2.0 * k * theta

    a = 0.5 * w2 * (qp - shift) ** 2
    b = 0.5 * w2 * (qp + shift) ** 2
    gam2 = np.exp(-0.5 * oc2 * (qm - shift) ** 2)
    gt = np.exp(-0.5 * (a + b))

    y = 2.0 * qp * w2 * k * theta
    x = qp * qm * delta_z / (2.0 * k) + 2.0 * qp * z_sm * theta

    sh = np.sinh(np.clip(0.5 * y, -0.5 * _SINH_CUTOFF, 0.5 * _SINH_CUTOFF))
    t = np.where(np.abs(y) < _SINH_CUTOFF,
                 gt * sh * sh,
                 0.25 * np.exp(-np.minimum(a, b)))

    cx = np.cos(0.5 * x)
    sx = np.sin(0.5 * x)
    same = gam2 * (t + gt * cx * cx)
    diff = gam2 * (t + gt * sx * sx)
    return same, diff


def coincidence_pair_flat(q1, q2, theta, delta_z, z_sm, k, w_p, omega_c, a2b2):
    """Element-wise density for both polarization branches.

    ``q1`` and ``q2`` are equal-length 1-D arrays; returns two 1-D arrays
    (same-polarization branch, different-polarization branch).
    """
    q1 = np.asarray(q1, dtype=np.float64)
    q2 = np.asarray(q2, dtype=np.float64)
    same, diff = _branches(q1 + q2, q1 - q2, theta, delta_z, z_sm,
                           k, w_p, omega_c)
    return a2b2 * same, a2b2 * diff


def coincidence_pair_grid(q_rows, q_cols, theta, delta_z, z_sm, k, w_p,
                          omega_c, a2b2):
    """Density for both branches on the tensor grid q_rows x q_cols.

    Returns two 2-D arrays of shape (len(q_rows), len(q_cols)).
    """
    q1 = np.asarray(q_rows, dtype=np.float64)[:, None]
    q2 = np.asarray(q_cols, dtype=np.float64)[None, :]
    same, diff = _branches(q1 + q2, q1 - q2, theta, delta_z, z_sm,
                           k, w_p, omega_c)
    return a2b2 * same, a2b2 * diff
