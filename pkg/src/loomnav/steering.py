"""Steering laws.

All laws return a curvature (1/m); positive values turn the agent toward its
left normal.

``follow_control`` is the loom-minimizing following law. The two
feature-based primitives (``circling_control`` and
``distance_maintenance_control``) are reconstructions built on the same loom
vocabulary, and the three pursuit laws exist to synthesize reference
trajectories for the pursuit classifier.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBaselineError, InvalidInputError, TargetPassedError
from .kinematics import VehicleState
from .perception import EPS_FRONT


class Kind(str, enum.Enum):
    FOLLOW = "Follow"
    DISTANCE_MAINTAIN = "DistanceMaintain"
    CIRCLE = "Circle"
    CLASSICAL_PURSUIT = "ClassicalPursuit"
    CONSTANT_BEARING = "ConstantBearing"
    MOTION_CAMOUFLAGE = "MotionCamouflage"


@dataclass(frozen=True)
class ControlLaw:
    kind: Kind
    gain: float
    targets: tuple = ()
    setpoint: float | None = None

    def __post_init__(self):
        if not self.gain > 0:
            raise InvalidInputError("gain must be positive")
        want = 2 if self.kind is Kind.DISTANCE_MAINTAIN else 1
        if len(self.targets) != want:
            raise InvalidInputError(f"{self.kind.value} takes exactly {want} target(s)")

    def label(self) -> str:
        return f"{self.kind.value}[{','.join(str(t) for t in self.targets)}]"


def wrap_angle(a: float) -> float:
    """Wrap to [-pi, pi)."""
    return (a + math.pi) % (2.0 * math.pi) - math.pi


# --- following ------------------------------------------------------------

def follow_control(leader: VehicleState, follower: VehicleState, k: float = 1.0) -> float:
    """``u_f = k (x_l . y_f)``: turn toward the leader's heading."""
    if not k > 0:
        raise InvalidInputError("k must be positive")
    return k * float(leader.tangent @ follower.normal)


def lyapunov_value(leader: VehicleState, follower: VehicleState) -> float:
    """``V = 1 - x_l . x_f``, in [0, 2]."""
    return max(0.0, 1.0 - float(leader.tangent @ follower.tangent))


def lyapunov_rate(leader: VehicleState, follower: VehicleState, u_follower: float,
                  u_leader: float = 0.0) -> float:
    """Time derivative of :func:`lyapunov_value` along the dynamics.

    Includes the speed factors, so with ``u_leader = 0`` and the following
    law this is ``-v_f k (x_l . y_f)^2``.
    """
    xl_yf = float(leader.tangent @ follower.normal)
    xf_yl = float(follower.tangent @ leader.normal)
    return -(leader.speed * u_leader * xf_yl + follower.speed * u_follower * xl_yf)


# --- stationary features ---------------------------------------------------

def feature_loom(feature, state: VehicleState) -> float:
    """Loom of a stationary feature, ``v (|r| + r_x) / |r|^2`` in 1/s.

    This is the range loom ``v/|r|`` plus the expansion rate
    ``v r_x / |r|^2``. On a circle of radius ``R`` around the feature it
    equals ``v/R``.
    """
    r = np.asarray(feature, dtype=float) - state.position
    rho2 = float(r @ r)
    if rho2 <= EPS_FRONT * EPS_FRONT:
        raise DegenerateBaselineError("agent is on top of the feature")
    rho = math.sqrt(rho2)
    return state.speed * (rho + float(r @ state.tangent)) / rho2


def circle_setpoint(speed: float, radius: float) -> float:
    """Loom setpoint that holds a standoff ``radius`` around a feature."""
    return speed / radius


def circling_control(feature, state: VehicleState, k: float, loom_setpoint: float,
                     abeam_tolerance: float = 0.25, side_zone: float = 0.2) -> float:
    """Hold the feature loom at ``loom_setpoint``.

    When the feature looms more than the setpoint the agent turns away from
    it, when less it turns toward it; the result is a standoff arc around
    the feature. Which way is "toward" is the side of the feature, blended
    linearly within ``side_zone`` radians of dead ahead so the command does
    not flip sign while the agent points at the feature. Raises
    :class:`TargetPassedError` once the feature is more than
    ``abeam_tolerance`` radians behind the beam.
    """
    r = np.asarray(feature, dtype=float) - state.position
    rho = math.hypot(r[0], r[1])
    if rho <= EPS_FRONT:
        raise DegenerateBaselineError("agent is on top of the feature")
    r_x = float(r @ state.tangent)
    if r_x < -rho * math.sin(abeam_tolerance):
        raise TargetPassedError("circling target is behind the agent")
    side = max(-1.0, min(1.0, float(r @ state.normal) / (rho * math.sin(side_zone))))
    err = feature_loom(feature, state) - loom_setpoint
    return -side * k * err


def distance_maintenance_control(f1, f2, state: VehicleState, k: float) -> float:
    """Balance the looms of two features so the agent passes between them.

    The output is ``k (loom(f1) - loom(f2))`` when ``f1`` lies to the right
    of ``f2`` as seen from the agent; the sign flips otherwise, so the agent
    always turns away from the faster-looming feature.
    """
    f1 = np.asarray(f1, dtype=float)
    f2 = np.asarray(f2, dtype=float)
    t = state.tangent
    if float((f1 - state.position) @ t) <= EPS_FRONT and float((f2 - state.position) @ t) <= EPS_FRONT:
        raise TargetPassedError("both features are behind the agent")
    orient = 1.0 if float((f1 - f2) @ state.normal) <= 0.0 else -1.0
    return orient * k * (feature_loom(f1, state) - feature_loom(f2, state))


# --- reference pursuit laws --------------------------------------------------

def _baseline(leader: VehicleState, follower: VehicleState) -> np.ndarray:
    r = leader.position - follower.position
    if math.hypot(r[0], r[1]) <= EPS_FRONT:
        raise DegenerateBaselineError("leader and follower coincide")
    return r


def bearing(leader: VehicleState, follower: VehicleState) -> float:
    """Signed angle from the follower heading to the baseline direction."""
    r = _baseline(leader, follower)
    return math.atan2(float(r @ follower.normal), float(r @ follower.tangent))


def baseline_angle(leader: VehicleState, follower: VehicleState) -> float:
    r = _baseline(leader, follower)
    return math.atan2(r[1], r[0])


def classical_pursuit_control(leader: VehicleState, follower: VehicleState, k: float) -> float:
    """``k sin(bearing)``: point the velocity at the leader."""
    return k * math.sin(bearing(leader, follower))


def constant_bearing_control(leader: VehicleState, follower: VehicleState, k: float,
                             bearing_setpoint: float) -> float:
    """``k (bearing - setpoint)``; classical pursuit is setpoint zero."""
    return k * wrap_angle(bearing(leader, follower) - bearing_setpoint)


def motion_camouflage_control(leader: VehicleState, follower: VehicleState, k: float,
                              previous_baseline, dt: float) -> float:
    """Null the rotation of the baseline direction.

    The rotation rate is the finite difference of the baseline angle between
    ``previous_baseline`` (the leader-minus-follower vector one step ago)
    and now. A positive (counter-clockwise) rate calls for a left turn:
    turning left reduces the rate for a leader ahead.
    """
    if not dt > 0:
        raise InvalidInputError("dt must be positive")
    prev = np.asarray(previous_baseline, dtype=float)
    if math.hypot(prev[0], prev[1]) <= EPS_FRONT:
        raise DegenerateBaselineError("previous baseline is degenerate")
    now = baseline_angle(leader, follower)
    rate = wrap_angle(now - math.atan2(prev[1], prev[0])) / dt
    return k * rate
