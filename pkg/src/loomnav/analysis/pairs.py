"""Leader/follower pair records, pair metrics and the pursuit-law classifier."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ..errors import RangeNotCoveredError, SeriesTooShortError, UnpairedInputError
from ..kinematics import Trajectory
from .paths import cumulative_arc_length
from .smoothing import DEFAULT_SMOOTHING, smooth

DEFAULT_TOL_BEARING = 0.1
DEFAULT_TOL_STD = 0.1
MIN_SERIES = 10


class PursuitClass(str, enum.Enum):
    CLASSICAL = "Classical"
    CONSTANT_BEARING = "ConstantBearing"
    MOTION_CAMOUFLAGE = "MotionCamouflage"
    NONE = "None"


@dataclass
class PairRecord:
    leader_traj: Trajectory
    follower_traj: Trajectory
    covisibility: tuple[float, float]
    initial_distance: float
    times: np.ndarray           # follower frame times inside the covisibility window
    baseline_angle: np.ndarray  # unwrapped angle of r/|r|
    bearing_angle: np.ndarray   # unwrapped signed angle from x_f to r/|r|

    @property
    def angle_series(self) -> np.ndarray:
        return np.column_stack([self.baseline_angle, self.bearing_angle])


def _interp_positions(traj: Trajectory, t: np.ndarray) -> np.ndarray:
    p = traj.positions
    return np.column_stack([np.interp(t, traj.times, p[:, 0]), np.interp(t, traj.times, p[:, 1])])


def make_pair(leader: Trajectory, follower: Trajectory,
              smooth_factor: float | None = DEFAULT_SMOOTHING, time_tol: float = 1e-9) -> PairRecord:
    """Build a :class:`PairRecord` over the interval where both tracks exist.

    Both tracks are smoothed first unless ``smooth_factor`` is None. Angle
    series are sampled at the follower's frames, with the leader position
    linearly interpolated in time.
    """
    lo = max(leader.times[0], follower.times[0])
    hi = min(leader.times[-1], follower.times[-1])
    if hi < lo:
        raise UnpairedInputError(f"tracks {leader.agent_id} and {follower.agent_id} never coexist")
    if smooth_factor is not None:
        leader = smooth(leader, smooth_factor) if len(leader) >= 4 else leader
        follower = smooth(follower, smooth_factor) if len(follower) >= 4 else follower
    sel = (follower.times >= lo - time_tol) & (follower.times <= hi + time_tol)
    t = follower.times[sel]
    if len(t) == 0:
        raise UnpairedInputError("no follower frame inside the covisibility window")
    fpos = follower.positions[sel]
    ftan = follower.tangents[sel]
    r = _interp_positions(leader, t) - fpos
    dist = np.hypot(r[:, 0], r[:, 1])
    base = np.arctan2(r[:, 1], r[:, 0])
    # signed angle from heading to baseline
    brg = np.arctan2(ftan[:, 0] * r[:, 1] - ftan[:, 1] * r[:, 0], ftan[:, 0] * r[:, 0] + ftan[:, 1] * r[:, 1])
    return PairRecord(leader, follower, (float(lo), float(hi)), float(dist[0]), t,
                      np.unwrap(base), np.unwrap(brg))


def classify_pursuit(pair: PairRecord, tol_bearing: float = DEFAULT_TOL_BEARING,
                     tol_std: float = DEFAULT_TOL_STD) -> PursuitClass:
    """Check the pair against classical pursuit, constant bearing and motion
    camouflage, in that order."""
    if len(pair.times) < MIN_SERIES:
        raise SeriesTooShortError(f"{len(pair.times)} frames; at least {MIN_SERIES} needed")
    m = pursuit_measures(pair)
    if m["mean_abs_bearing"] < tol_bearing:
        return PursuitClass.CLASSICAL
    if m["std_bearing"] < tol_std:
        return PursuitClass.CONSTANT_BEARING
    if m["std_baseline"] < tol_std:
        return PursuitClass.MOTION_CAMOUFLAGE
    return PursuitClass.NONE


def pursuit_measures(pair: PairRecord) -> dict[str, float]:
    # bearing is a relative angle; recentre the unwrapped series on (-pi, pi]
    b = pair.bearing_angle
    b = b - 2 * math.pi * np.round(np.median(b) / (2 * math.pi))
    return {
        "mean_abs_bearing": float(np.mean(np.abs(b))),
        "std_bearing": float(np.std(b)),
        "std_baseline": float(np.std(pair.baseline_angle)),
    }


def clip_x_range(points: np.ndarray, x_range: tuple[float, float]) -> np.ndarray:
    """Portion of a polyline from its first crossing of ``x_range[0]`` to the
    next crossing of ``x_range[1]``, with interpolated end points."""
    x0, x1 = x_range
    x = points[:, 0]

    def crossing(start, level):
        for i in range(start, len(points)):
            if x[i] >= level:
                if i == 0 or x[i] == level:
                    return i, points[i].copy()
                a = (level - x[i - 1]) / (x[i] - x[i - 1])
                return i, points[i - 1] + a * (points[i] - points[i - 1])
        return None

    first = crossing(0, x0)
    if first is None or (first[0] == 0 and x[0] > x0):
        raise RangeNotCoveredError(f"trajectory does not reach x={x0} from below")
    last = crossing(first[0], x1)
    if last is None:
        raise RangeNotCoveredError(f"trajectory does not reach x={x1}")
    i0, p0 = first
    i1, p1 = last
    inner = points[i0:i1] if i0 < i1 else np.empty((0, 2))
    if len(inner) and np.allclose(inner[0], p0):
        inner = inner[1:]
    return np.vstack([p0, inner, p1])


def path_mean_y(points: np.ndarray) -> float:
    """Arc-length weighted mean of y along a polyline."""
    seg = np.hypot(*np.diff(points, axis=0).T)
    total = seg.sum()
    if total == 0:
        return float(points[0, 1])
    mid = 0.5 * (points[1:, 1] + points[:-1, 1])
    return float(np.sum(seg * mid) / total)


@dataclass(frozen=True)
class PairMetrics:
    delta_mean_y: float
    delta_route_length: float
    initial_distance: float


def pair_metrics(pair: PairRecord, x_range: tuple[float, float] = (0.0, 12.0)) -> PairMetrics:
    """Follower-minus-leader mean y and route length over ``x_range``."""
    lp = clip_x_range(pair.leader_traj.positions, x_range)
    fp = clip_x_range(pair.follower_traj.positions, x_range)
    dy = path_mean_y(fp) - path_mean_y(lp)
    dl = cumulative_arc_length(fp)[-1] - cumulative_arc_length(lp)[-1]
    return PairMetrics(float(dy), float(dl), pair.initial_distance)
