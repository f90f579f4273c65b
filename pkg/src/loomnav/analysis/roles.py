"""Leader/follower roles recovered from recorded tracks."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientEnsembleError, InvalidInputError, RangeNotCoveredError
from ..strategy import AgentView, PairingParams, detect_leader
from .pairs import clip_x_range, path_mean_y


class RoleClass(str, enum.Enum):
    C1 = "C1"  # single: neither leader nor follower
    C2 = "C2"  # leader only
    C3 = "C3"  # leader and follower
    C4 = "C4"  # follower only

    @property
    def group(self) -> str:
        return "G1" if self in (RoleClass.C1, RoleClass.C2) else "G2"


def leader_relation(trajs, pairing: PairingParams | None = None,
                    time_tol: float = 1e-9) -> dict:
    """Map each agent id to the set of agents that led it.

    At every frame of a track, the other tracks present at that time are
    interpolated to the frame and :func:`detect_leader` picks the leader.
    """
    pairing = pairing or PairingParams()
    trajs = list(trajs)
    led_by = {t.agent_id: set() for t in trajs}
    for ego in trajs:
        others = [o for o in trajs if o is not ego and o.emergence_time < ego.emergence_time
                  and o.times[0] <= ego.times[-1] + time_tol and o.times[-1] >= ego.times[0] - time_tol]
        if not others:
            continue
        t = ego.times
        epos = ego.positions
        etan = ego.tangents
        tracks = []
        for o in others:
            inside = (t >= o.times[0] - time_tol) & (t <= o.times[-1] + time_tol)
            p = o.positions
            ox = np.interp(t, o.times, p[:, 0])
            oy = np.interp(t, o.times, p[:, 1])
            tracks.append((o, inside, np.column_stack([ox, oy])))
        since_ego = float(t[0])
        for i, now in enumerate(t):
            views = [AgentView(o.agent_id, o.emergence_time, float(o.times[0]), pos[i], None)
                     for o, inside, pos in tracks if inside[i]]
            if not views:
                continue
            me = AgentView(ego.agent_id, ego.emergence_time, since_ego, epos[i], etan[i])
            lid = detect_leader(me, views, pairing, float(now))
            if lid is not None:
                led_by[ego.agent_id].add(lid)
    return led_by


def classify_roles(trajs, pairing: PairingParams | None = None) -> dict:
    """Role class of every trajectory, keyed by agent id."""
    led_by = leader_relation(trajs, pairing)
    leaders = set().union(*led_by.values()) if led_by else set()
    out = {}
    for aid, ls in led_by.items():
        follower = bool(ls)
        leader = aid in leaders
        if leader and follower:
            out[aid] = RoleClass.C3
        elif leader:
            out[aid] = RoleClass.C2
        elif follower:
            out[aid] = RoleClass.C4
        else:
            out[aid] = RoleClass.C1
    return out


def role_counts(roles: dict) -> dict[str, int]:
    c = Counter(r.value for r in roles.values())
    return {k.value: c.get(k.value, 0) for k in RoleClass}


def groups(roles: dict) -> dict[str, list]:
    out = {"G1": [], "G2": []}
    for aid, r in roles.items():
        out[r.group].append(aid)
    return out


@dataclass(frozen=True)
class FollowerEffect:
    x_range: tuple[float, float]
    g1_mean_y: float
    g2_mean_y: float
    g1_count: int
    g2_count: int

    @property
    def difference(self) -> float:
        return self.g2_mean_y - self.g1_mean_y


def follow_phase_x_range(trajs, quantiles=(5.0, 95.0)) -> tuple[float, float]:
    """Central x interval of all samples logged under a Follow primitive."""
    xs = [p[0] for tr in trajs for p, lab in zip(tr.positions, tr.meta.get("primitive", ()))
          if lab.startswith("Follow")]
    if not xs:
        raise InvalidInputError("no sample was flown under the following law")
    lo, hi = np.percentile(xs, quantiles)
    return float(lo), float(hi)


def follower_effect(trajs, pairing: PairingParams | None = None, x_range=None) -> FollowerEffect:
    """Mean y of the leader group (C1, C2) and follower group (C3, C4).

    Each trajectory contributes its arc-length weighted mean y over
    ``x_range`` (default: the Follow-phase range of the ensemble);
    trajectories that do not span the range are left out.
    """
    trajs = list(trajs)
    if x_range is None:
        x_range = follow_phase_x_range(trajs)
    roles = classify_roles(trajs, pairing)
    means = {"G1": [], "G2": []}
    for tr in trajs:
        try:
            y = path_mean_y(clip_x_range(tr.positions, x_range))
        except RangeNotCoveredError:
            continue
        means[roles[tr.agent_id].group].append(y)
    if not means["G1"] or not means["G2"]:
        raise InsufficientEnsembleError("both groups need at least one trajectory spanning the range")
    return FollowerEffect(tuple(x_range), float(np.mean(means["G1"])), float(np.mean(means["G2"])),
                          len(means["G1"]), len(means["G2"]))
