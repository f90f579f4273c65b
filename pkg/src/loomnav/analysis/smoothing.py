"""Cubic smoothing spline.

Minimizes ``F * sum (y_i - g(s_i))^2 + (1 - F) * integral g''(s)^2 ds``
over natural cubic splines with knots at the samples. ``F = 1`` interpolates
and ``F = 0`` gives the least-squares straight line.

Tracks are smoothed against the frame index (time divided by the median
frame interval) so that ``F`` means the same thing regardless of the camera
rate; with unit knot spacing ``F = 0.85`` sits in the useful middle of the
range.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded

from ..errors import InvalidInputError, TooFewSamplesError
from ..kinematics import Trajectory, VehicleState

DEFAULT_SMOOTHING = 0.85


def _reinsch(s: np.ndarray, y: np.ndarray, alpha: float) -> np.ndarray:
    """Fitted values of the spline minimizing ``sum (y-g)^2 + alpha int g''^2``.

    Solves ``(R + alpha Q^T Q) gamma = Q^T y`` and returns ``y - alpha Q gamma``
    (Green & Silverman notation); ``y`` may hold several columns. For
    ``alpha > 1`` the system is divided through by ``alpha`` so that heavy
    smoothing does not overflow.
    """
    n = len(s)
    h = np.diff(s)
    m = n - 2
    # Q is n x (n-2) with three non-zeros per column
    q0 = 1.0 / h[:-1]
    q2 = 1.0 / h[1:]
    q1 = -q0 - q2
    # R is tridiagonal (n-2) x (n-2)
    r_diag = (h[:-1] + h[1:]) / 3.0
    r_off = h[1:-1] / 6.0

    # Q^T Q is pentadiagonal; columns j, j+1, j+2 of Q overlap
    d0 = q0 ** 2 + q1 ** 2 + q2 ** 2
    d1 = q1[:-1] * q0[1:] + q2[:-1] * q1[1:]
    d2 = q2[:-2] * q0[2:]

    # a * R + b * Q^T Q, with the returned gamma pre-multiplied by alpha
    a, b = (1.0 / alpha, 1.0) if alpha > 1.0 else (1.0, alpha)
    ab = np.zeros((5, m))
    ab[2] = a * r_diag + b * d0
    ab[1, 1:] = a * r_off + b * d1
    ab[3, :-1] = a * r_off + b * d1
    ab[0, 2:] = b * d2
    ab[4, :-2] = b * d2

    qty = q0[:, None] * y[:-2] + q1[:, None] * y[1:-1] + q2[:, None] * y[2:]
    gamma = solve_banded((2, 2), ab, qty)
    if alpha <= 1.0:
        gamma = alpha * gamma

    qg = np.zeros_like(y)
    qg[:-2] += q0[:, None] * gamma
    qg[1:-1] += q1[:, None] * gamma
    qg[2:] += q2[:, None] * gamma
    return y - qg


def smoothing_spline(s, y, F: float = DEFAULT_SMOOTHING) -> np.ndarray:
    """Smoothed values of ``y`` (shape ``(n,)`` or ``(n, k)``) at knots ``s``."""
    s = np.asarray(s, dtype=float)
    y = np.asarray(y, dtype=float)
    if not 0.0 <= F <= 1.0:
        raise InvalidInputError("F must lie in [0, 1]")
    if len(s) < 4:
        raise TooFewSamplesError("smoothing needs at least 4 samples")
    if np.any(np.diff(s) <= 0):
        raise InvalidInputError("knots must be strictly increasing")
    col = y.ndim == 1
    Y = y[:, None] if col else y
    if F == 1.0:
        out = Y.copy()
    elif F == 0.0:
        A = np.column_stack([np.ones_like(s), s - s.mean()])
        coef, *_ = np.linalg.lstsq(A, Y, rcond=None)
        out = A @ coef
    else:
        out = _reinsch(s, Y, (1.0 - F) / F)
    return out[:, 0] if col else out


def frame_abscissa(times) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    dt = float(np.median(np.diff(t)))
    return (t - t[0]) / dt


def smooth(traj: Trajectory, F: float = DEFAULT_SMOOTHING) -> Trajectory:
    """Smooth both coordinates of ``traj`` and re-derive headings and speeds.

    The smoothed path is the natural cubic spline through the fitted values,
    so tangents come from its derivative at each sample time.
    """
    if len(traj) < 4:
        raise TooFewSamplesError("smoothing needs at least 4 samples")
    s = frame_abscissa(traj.times)
    pts = smoothing_spline(s, traj.positions, F)
    deriv = CubicSpline(s, pts, bc_type="natural")(s, 1)
    frame_dt = float(np.median(np.diff(traj.times)))
    states = []
    for p, d, old in zip(pts, deriv, traj.states):
        norm = float(np.hypot(d[0], d[1]))
        if norm > 1e-12:
            states.append(VehicleState.make(p, d, norm / frame_dt))
        else:
            states.append(VehicleState.make(p, old.tangent, old.speed))
    return Trajectory(traj.agent_id, traj.times.copy(), states, traj.emergence_time, dict(traj.meta))
