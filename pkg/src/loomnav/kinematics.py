"""Planar unit-speed-frame vehicle model.

Each agent carries a right-handed Frenet frame ``(tangent, normal)`` and
moves with constant speed ``v`` under a curvature input ``u``::

    r' = v x        x' = v u y        y' = -v u x

For curvature held constant over a step the flow is a circular arc, so
:func:`step` applies that arc exactly instead of a generic ODE solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateStateError, InvalidInputError

CAMERA_RATE_HZ = 131.5
DEFAULT_DT = 1.0 / CAMERA_RATE_HZ
DEFAULT_SPEED = 10.17

_STRAIGHT_U = 1e-12
_FRAME_TOL = 1e-9


def rot90(v: np.ndarray) -> np.ndarray:
    """Rotate a 2-vector by +90 degrees."""
    return np.array([-v[1], v[0]])


def cross2(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


@dataclass(frozen=True)
class VehicleState:
    """Position, unit tangent, unit normal and speed of one agent.

    ``normal`` is always ``tangent`` rotated by +90 degrees. Use
    :meth:`make` or :meth:`from_heading` to build a state from a
    heading; the raw constructor trusts its inputs.
    """

    position: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    speed: float = DEFAULT_SPEED

    @classmethod
    def make(cls, position, tangent, speed: float = DEFAULT_SPEED) -> "VehicleState":
        t = np.asarray(tangent, dtype=float)
        n = math.hypot(t[0], t[1])
        if not n > 1e-12:
            raise DegenerateStateError("tangent has zero length")
        t = t / n
        return cls(np.asarray(position, dtype=float).copy(), t, rot90(t), float(speed))

    @classmethod
    def from_heading(cls, position, heading: float, speed: float = DEFAULT_SPEED) -> "VehicleState":
        t = np.array([math.cos(heading), math.sin(heading)])
        return cls(np.asarray(position, dtype=float).copy(), t, rot90(t), float(speed))

    @property
    def heading(self) -> float:
        return math.atan2(self.tangent[1], self.tangent[0])

    def frame_error(self) -> float:
        """Largest violation of the orthonormal right-handed frame conditions."""
        t, n = self.tangent, self.normal
        return max(
            abs(math.hypot(t[0], t[1]) - 1.0),
            abs(math.hypot(n[0], n[1]) - 1.0),
            abs(float(t @ n)),
            abs(cross2(t, n) - 1.0),
        )

    def is_valid(self, tol: float = _FRAME_TOL) -> bool:
        finite = np.all(np.isfinite(self.position)) and np.all(np.isfinite(self.tangent))
        return bool(finite) and self.speed > 0 and self.frame_error() <= tol


@dataclass
class Trajectory:
    """Time-stamped states of one agent.

    ``emergence_time`` is the first appearance of the agent; for simulated
    agents it is the sampled arrival time, which can precede the first
    sample by less than one frame.
    """

    agent_id: int | str
    times: np.ndarray
    states: list[VehicleState]
    emergence_time: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.times) != len(self.states):
            raise InvalidInputError("times and states differ in length")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise InvalidInputError("trajectory times must be strictly increasing")
        if self.emergence_time is None and len(self.times):
            self.emergence_time = float(self.times[0])

    def __len__(self) -> int:
        return len(self.states)

    @property
    def positions(self) -> np.ndarray:
        return np.array([s.position for s in self.states]).reshape(-1, 2)

    @property
    def tangents(self) -> np.ndarray:
        return np.array([s.tangent for s in self.states]).reshape(-1, 2)

    @classmethod
    def from_positions(cls, agent_id, times, positions, speed: float | None = None,
                       emergence_time: float | None = None) -> "Trajectory":
        """Build a trajectory from bare positions, estimating tangents by
        central differences (one-sided at the ends)."""
        times = np.asarray(times, dtype=float)
        pts = np.asarray(positions, dtype=float).reshape(-1, 2)
        if len(pts) < 2:
            raise InvalidInputError("need at least two positions to infer headings")
        d = np.gradient(pts, times, axis=0)
        speeds = np.hypot(d[:, 0], d[:, 1])
        states = []
        for i, p in enumerate(pts):
            v = speed if speed is not None else (speeds[i] if speeds[i] > 0 else 1.0)
            tan = d[i] if speeds[i] > 1e-12 else (states[-1].tangent if states else np.array([1.0, 0.0]))
            states.append(VehicleState.make(p, tan, v))
        return cls(agent_id, times, states, emergence_time)

    def check(self, tol: float = _FRAME_TOL) -> None:
        for s in self.states:
            if not s.is_valid(tol):
                raise DegenerateStateError(f"invalid state in trajectory {self.agent_id}")


def step(state: VehicleState, u: float, dt: float, max_curvature: float | None = None) -> VehicleState:
    """Advance ``state`` by ``dt`` seconds with curvature ``u`` held constant.

    The heading turns by ``theta = v u dt`` and the position moves along the
    circular arc of radius ``1/|u|``. Optionally clamps ``|u|``.
    """
    if not (math.isfinite(u) and math.isfinite(dt)):
        raise InvalidInputError(f"non-finite input u={u!r}, dt={dt!r}")
    if dt <= 0:
        raise InvalidInputError("dt must be positive")
    if max_curvature is not None:
        u = max(-max_curvature, min(max_curvature, u))

    ds = state.speed * dt
    theta = ds * u
    c, s = math.cos(theta), math.sin(theta)
    if abs(u) < _STRAIGHT_U:
        along = 1.0 - theta * theta / 6.0
        across = 0.5 * theta
    else:
        along = s / theta
        # 1 - cos(theta) written without cancellation
        across = 2.0 * math.sin(0.5 * theta) ** 2 / theta
    t, n = state.tangent, state.normal
    pos = state.position + ds * (along * t + across * n)
    new_t = c * t + s * n
    return VehicleState(pos, new_t, rot90(new_t), state.speed)


def renormalize(state: VehicleState) -> VehicleState:
    """Rescale the tangent to unit length and rebuild the normal from it."""
    t = np.asarray(state.tangent, dtype=float)
    norm = math.hypot(t[0], t[1])
    if norm < 1e-9:
        raise DegenerateStateError("tangent is (near) zero")
    t = t / norm
    return VehicleState(np.asarray(state.position, dtype=float), t, rot90(t), state.speed)


def integrate(state: VehicleState, controls: Iterable[float] | Sequence[float], dt: float,
              t0: float = 0.0, agent_id=0) -> Trajectory:
    """Roll out a piecewise-constant curvature sequence from ``state``."""
    states = [state]
    for u in controls:
        states.append(step(states[-1], float(u), dt))
    times = t0 + dt * np.arange(len(states))
    return Trajectory(agent_id, times, states)
