"""CSV ingestion and output for trajectories, episodes and path statistics."""

from __future__ import annotations

import csv
import io
from collections import OrderedDict

import numpy as np

from ..errors import InvalidInputError
from ..kinematics import Trajectory, VehicleState

EPISODE_COLUMNS = ("t", "x", "y", "heading_x", "heading_y", "u", "primitive", "leader_id")
STATS_COLUMNS = ("arc_s", "mean_x", "mean_y", "cov_xx", "cov_xy", "cov_yy", "eig1", "eig2", "axis1_x", "axis1_y")
SWITCH_COLUMNS = ("agent_id", "t", "from", "to", "reason")


def fmt(x) -> str:
    """Shortest round-trip text for a float; identical on every run."""
    return repr(float(x))


def _id(value: str):
    value = value.strip()
    try:
        return int(value)
    except ValueError:
        return value


def read_trajectories(path, default_id=None) -> list[Trajectory]:
    """Read a CSV with columns ``t, x, y`` and an optional ``agent_id``.

    Rows are grouped by agent id (first-appearance order) and sorted by time
    within a track. Without an ``agent_id`` column the whole file is one
    track named ``default_id`` (the file stem is a good choice).
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        cols = [c.strip() for c in (reader.fieldnames or [])]
        missing = {"t", "x", "y"} - set(cols)
        if missing:
            raise InvalidInputError(f"{path}: missing column(s) {sorted(missing)}")
        reader.fieldnames = cols
        tracks: OrderedDict = OrderedDict()
        for line, row in enumerate(reader, start=2):
            try:
                vals = (float(row["t"]), float(row["x"]), float(row["y"]))
            except (TypeError, ValueError) as exc:
                raise InvalidInputError(f"{path}:{line}: bad number") from exc
            if not all(np.isfinite(vals)):
                raise InvalidInputError(f"{path}:{line}: non-finite value")
            aid = _id(row["agent_id"]) if "agent_id" in cols else default_id
            tracks.setdefault(aid, []).append(vals)
    out = []
    for aid, rows in tracks.items():
        arr = np.array(sorted(rows))
        out.append(Trajectory.from_positions(aid, arr[:, 0], arr[:, 1:]))
    return out


def write_trajectories(fh, trajs) -> None:
    """Multi-track CSV (agent_id, t, x, y)."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["agent_id", "t", "x", "y"])
    for tr in trajs:
        for t, p in zip(tr.times, tr.positions):
            w.writerow([tr.agent_id, fmt(t), fmt(p[0]), fmt(p[1])])


def episode_csv(traj: Trajectory) -> str:
    """One agent of a simulated episode, one row per frame."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(EPISODE_COLUMNS)
    u = traj.meta.get("u", [0.0] * len(traj))
    prim = traj.meta.get("primitive", [""] * len(traj))
    lead = traj.meta.get("leader_id", [None] * len(traj))
    for t, s, ui, pi, li in zip(traj.times, traj.states, u, prim, lead):
        w.writerow([fmt(t), fmt(s.position[0]), fmt(s.position[1]), fmt(s.tangent[0]), fmt(s.tangent[1]),
                    fmt(ui), pi, "" if li is None else li])
    return buf.getvalue()


def read_episode_csv(path, agent_id=None) -> Trajectory:
    """Inverse of :func:`episode_csv` (headings come from the file)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != EPISODE_COLUMNS:
            raise InvalidInputError(f"{path}: not an episode CSV")
        rows = list(reader)
    times = [float(r["t"]) for r in rows]
    states = [VehicleState.make((float(r["x"]), float(r["y"])), (float(r["heading_x"]), float(r["heading_y"])))
              for r in rows]
    tr = Trajectory(agent_id, np.array(times), states)
    tr.meta.update(u=[float(r["u"]) for r in rows], primitive=[r["primitive"] for r in rows],
                   leader_id=[_id(r["leader_id"]) if r["leader_id"] else None for r in rows])
    return tr


def switch_log_csv(trajs) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWITCH_COLUMNS)
    for tr in trajs:
        for t, a, b, reason in tr.meta.get("switches", []):
            w.writerow([tr.agent_id, fmt(t), a or "", b, reason])
    return buf.getvalue()


def stats_csv(stats) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STATS_COLUMNS)
    for i in range(len(stats)):
        c = stats.covariances[i]
        w.writerow([fmt(v) for v in (
            stats.arc_positions[i], stats.mean_points[i, 0], stats.mean_points[i, 1],
            c[0, 0], c[0, 1], c[1, 1], stats.eigenvalues[i, 0], stats.eigenvalues[i, 1],
            stats.axes[i, 0, 0], stats.axes[i, 1, 0])])
    return buf.getvalue()
