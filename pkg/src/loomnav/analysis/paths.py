"""Arc-length resampling and ensemble path statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateStateError, InsufficientEnsembleError
from ..kinematics import Trajectory

DEFAULT_STEP = 0.1
MIN_ENSEMBLE = 20


def _points(traj) -> np.ndarray:
    if isinstance(traj, Trajectory):
        return traj.positions
    return np.asarray(traj, dtype=float).reshape(-1, 2)


def cumulative_arc_length(points: np.ndarray) -> np.ndarray:
    seg = np.hypot(*np.diff(points, axis=0).T)
    return np.concatenate([[0.0], np.cumsum(seg)])


def arc_length_resample(traj, step: float = DEFAULT_STEP) -> np.ndarray:
    """Points at arc lengths ``0, step, 2 step, ...`` along the polyline.

    Linear interpolation between samples; whatever is left after the last
    full step is dropped.
    """
    pts = _points(traj)
    if len(pts) < 2:
        raise DegenerateStateError("trajectory has fewer than two points")
    s = cumulative_arc_length(pts)
    total = s[-1]
    if not total > 0:
        raise DegenerateStateError("trajectory has zero arc length")
    n = int(math.floor(total / step + 1e-9)) + 1
    targets = step * np.arange(n)
    # repeated positions give zero-length segments; interp needs increasing s
    keep = np.concatenate([[True], np.diff(s) > 0])
    s, pts = s[keep], pts[keep]
    return np.column_stack([np.interp(targets, s, pts[:, 0]), np.interp(targets, s, pts[:, 1])])


@dataclass
class PathStatistics:
    arc_positions: np.ndarray      # (m,)
    mean_points: np.ndarray        # (m, 2)
    covariances: np.ndarray        # (m, 2, 2)
    eigenvalues: np.ndarray        # (m, 2), descending
    axes: np.ndarray               # (m, 2, 2); axes[i, :, j] is the j-th principal direction
    sample_counts: np.ndarray      # (m,)

    @property
    def ellipse_lengths(self) -> np.ndarray:
        """One-standard-deviation semi-axis lengths."""
        return np.sqrt(np.clip(self.eigenvalues, 0.0, None))

    def __len__(self) -> int:
        return len(self.arc_positions)


def principal_axes(cov: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors of a stack of symmetric 2x2
    matrices. Eigenvectors are sign-normalized so the first nonzero
    component is positive."""
    w, V = np.linalg.eigh(cov)
    w = w[..., ::-1]
    V = V[..., ::-1]
    first = np.where(np.abs(V[..., 0, :]) > 1e-15, V[..., 0, :], V[..., 1, :])
    V = V * np.where(first < 0, -1.0, 1.0)[..., None, :]
    return w, V


def ensemble_stats(trajs, step: float = DEFAULT_STEP, min_count: int = MIN_ENSEMBLE) -> PathStatistics:
    """Mean path and covariance at each arc-length sample.

    Every trajectory is resampled at ``step`` spacing and the ensemble is
    truncated to the shortest one. Covariances use the ``n - 1`` divisor.
    """
    trajs = list(trajs)
    if len(trajs) < min_count:
        raise InsufficientEnsembleError(f"{len(trajs)} trajectories; at least {min_count} needed")
    samples = [arc_length_resample(t, step) for t in trajs]
    m = min(len(p) for p in samples)
    P = np.stack([p[:m] for p in samples])  # (n, m, 2)
    n = len(P)

    # sequential accumulation keeps the arithmetic identical to a scalar loop
    acc = np.zeros((m, 2))
    for p in P:
        acc += p
    mean = acc / n

    sxx = np.zeros(m)
    sxy = np.zeros(m)
    syy = np.zeros(m)
    for p in P:
        dx = p[:, 0] - mean[:, 0]
        dy = p[:, 1] - mean[:, 1]
        sxx += dx * dx
        sxy += dx * dy
        syy += dy * dy
    cov = np.empty((m, 2, 2))
    cov[:, 0, 0] = sxx / (n - 1)
    cov[:, 0, 1] = cov[:, 1, 0] = sxy / (n - 1)
    cov[:, 1, 1] = syy / (n - 1)

    w, V = principal_axes(cov)
    return PathStatistics(step * np.arange(m), mean, cov, w, V, np.full(m, n))
