"""Synthesized leader/follower pairs for round-trip tests and demos.

The leader flies an open-loop curvature schedule; the follower closes the
loop with one of the steering laws. Both tracks are sampled at the camera
rate.
"""

from __future__ import annotations

import math

import numpy as np

from .kinematics import DEFAULT_DT, DEFAULT_SPEED, Trajectory, VehicleState, step
from .steering import (classical_pursuit_control, constant_bearing_control, follow_control,
                       motion_camouflage_control)

LAWS = ("classical", "constant_bearing", "motion_camouflage", "follow")


def weaving(amplitude: float = 0.15, period: float = 1.5):
    """Curvature schedule ``amplitude * sin(2 pi t / period)``."""
    return lambda t: amplitude * math.sin(2.0 * math.pi * t / period)


def ramp(u0: float = 0.05, u1: float = 0.2, duration: float = 3.0):
    """Curvature rising linearly from ``u0`` to ``u1`` over ``duration``."""
    return lambda t: u0 + (u1 - u0) * min(t, duration) / duration


# per-law defaults: gain, leader schedule, leader start relative to a
# follower at the origin heading along +x
_DEFAULTS = {
    "classical": dict(k=20.0, leader_u=weaving(0.15), leader_start=(2.0, 0.0)),
    "constant_bearing": dict(k=8.0, leader_u=weaving(0.15),
                             leader_start=(2.0 * math.cos(0.3), 2.0 * math.sin(0.3))),
    "motion_camouflage": dict(k=3.0, leader_u=weaving(0.3), leader_start=(2.0, 0.0)),
    "follow": dict(k=1.0, leader_u=ramp(), leader_start=(2.0, 0.5)),
}


def pursuit_pair(law: str, duration: float = 3.0, dt: float = DEFAULT_DT, speed: float = DEFAULT_SPEED,
                 k: float | None = None, leader_u=None, leader_start=None,
                 bearing_setpoint: float = 0.3) -> tuple[Trajectory, Trajectory]:
    """Closed-loop leader and follower trajectories under ``law``."""
    if law not in _DEFAULTS:
        raise ValueError(f"unknown law {law!r}; expected one of {LAWS}")
    d = _DEFAULTS[law]
    k = d["k"] if k is None else k
    leader_u = d["leader_u"] if leader_u is None else leader_u
    start = d["leader_start"] if leader_start is None else leader_start

    lead = VehicleState.from_heading(start, 0.0, speed)
    fol = VehicleState.from_heading((0.0, 0.0), 0.0, speed)
    prev = lead.position - fol.position
    ls, fs = [lead], [fol]
    n = int(round(duration / dt))
    for i in range(n):
        if law == "classical":
            u = classical_pursuit_control(lead, fol, k)
        elif law == "constant_bearing":
            u = constant_bearing_control(lead, fol, k, bearing_setpoint)
        elif law == "motion_camouflage":
            u = motion_camouflage_control(lead, fol, k, prev, dt)
        else:
            u = follow_control(lead, fol, k)
        prev = lead.position - fol.position
        lead = step(lead, leader_u(i * dt), dt)
        fol = step(fol, u, dt)
        ls.append(lead)
        fs.append(fol)
    t = dt * np.arange(n + 1)
    return Trajectory("leader", t, ls, 0.0), Trajectory("follower", t, fs, dt)
