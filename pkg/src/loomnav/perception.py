"""Relative-geometry observables seen by a follower.

Everything is expressed in the follower's body frame: ``r_x`` is the
distance of the leader ahead along the follower's heading and ``r_y`` the
offset along its left normal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BehindImagePlaneError, LeaderNotInFrontError
from .kinematics import VehicleState

EPS_FRONT = 1e-6
DEFAULT_FOCAL_LENGTH = 0.01
_FLOW_EPS = 1e-12


@dataclass(frozen=True)
class RelativeGeometry:
    r: np.ndarray
    r_x: float
    r_y: float
    alignment: float

    @property
    def alpha(self) -> float:
        """Unsigned angle between the two headings."""
        return math.acos(max(-1.0, min(1.0, self.alignment)))


def relative_geometry(leader: VehicleState, follower: VehicleState) -> RelativeGeometry:
    r = leader.position - follower.position
    align = float(follower.tangent @ leader.tangent)
    return RelativeGeometry(
        r=r,
        r_x=float(r @ follower.tangent),
        r_y=float(r @ follower.normal),
        alignment=max(-1.0, min(1.0, align)),
    )


def virtual_loom(leader: VehicleState, follower: VehicleState, eps_front: float = EPS_FRONT) -> float:
    """Virtual loom ``(1 - x_f . x_l) v_f / (r . x_f)`` in 1/s.

    Zero exactly when the headings are parallel. Raises
    :class:`LeaderNotInFrontError` unless the leader is at least
    ``eps_front`` metres ahead along the follower's heading.
    """
    r_x = float((leader.position - follower.position) @ follower.tangent)
    if r_x <= eps_front:
        raise LeaderNotInFrontError(f"leader not in front (r_x={r_x:.3g} m)")
    align = float(follower.tangent @ leader.tangent)
    # 1 - cos is non-negative; rounding can push it a few ulps below zero
    return max(0.0, 1.0 - align) * follower.speed / r_x


def image_coordinate(r_x: float, r_y: float, focal_length: float = DEFAULT_FOCAL_LENGTH) -> float:
    """Pinhole image offset ``d = f r_x / (r_y - f)`` of a point seen by the
    side-looking eye."""
    if r_y <= focal_length:
        raise BehindImagePlaneError(f"r_y={r_y} is not beyond the focal length {focal_length}")
    return focal_length * r_x / (r_y - focal_length)


def time_to_transit(d: float, d_dot: float) -> float:
    """``tau = d / d_dot``; infinite when the image does not move."""
    if abs(d_dot) < _FLOW_EPS:
        return math.inf
    return d / d_dot
