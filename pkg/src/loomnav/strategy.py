"""Integrated navigation: leader detection, primitive switching and episodes.

An agent without a leader circles the first obstacle (``Circle[pole]``) and
then runs the memorized chain ``DistanceMaintain[b,c] -> [c,d] -> ...``. An
agent with a leader replaces the circling stage by ``Follow[leader]``.
Switching looks at the nearest features along the agent's heading; an
obstacle on a collision course pre-empts whatever is active.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from . import steering
from .emergence import sample_poisson
from .errors import ConfigurationError, LoomNavError, TargetPassedError
from .kinematics import CAMERA_RATE_HZ, DEFAULT_DT, DEFAULT_SPEED, Trajectory, VehicleState, step
from .perception import EPS_FRONT
from .rng import stream
from .steering import ControlLaw, Kind

SCHEMA_VERSION = 1
FEATURE_KINDS = ("obstacle", "tree", "memorized-landmark")


class EndOfCorridor(LoomNavError):
    """No feature ahead and no leader: the agent's flight is over."""


# --- scenario ----------------------------------------------------------------

@dataclass
class Feature:
    id: str
    position: np.ndarray
    kind: str = "tree"


@dataclass
class EntryModel:
    line: tuple[tuple[float, float], tuple[float, float]]
    mean: np.ndarray
    covariance: np.ndarray
    heading_mean: float = 0.0
    heading_std: float = 0.0


@dataclass
class Scenario:
    features: dict[str, Feature]
    corridor_bounds: tuple[np.ndarray, np.ndarray]  # (upper edge, lower edge) polylines
    entry: EntryModel
    memorized_sequence: list[tuple[str, str]]
    circle_feature: str
    exit_x: float = 20.0
    name: str = ""
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        ids = set(self.features)
        for pair in self.memorized_sequence:
            if len(pair) != 2:
                raise ConfigurationError(f"memorized entry {pair!r} is not a pair")
            for fid in pair:
                if fid not in ids:
                    raise ConfigurationError(f"memorized sequence references unknown feature {fid!r}")
        if not self.memorized_sequence:
            raise ConfigurationError("memorized sequence is empty")
        for a, b in zip(self.memorized_sequence, self.memorized_sequence[1:]):
            if a[1] != b[0]:
                raise ConfigurationError(f"memorized pairs {a} and {b} do not chain")
        if self.circle_feature not in ids:
            raise ConfigurationError(f"unknown circle feature {self.circle_feature!r}")
        for f in self.features.values():
            if f.kind not in FEATURE_KINDS:
                raise ConfigurationError(f"feature {f.id!r} has unknown kind {f.kind!r}")
        cov = np.asarray(self.entry.covariance, dtype=float)
        if cov.shape != (2, 2) or not np.allclose(cov, cov.T):
            raise ConfigurationError("entry covariance must be a symmetric 2x2 matrix")
        if np.min(np.linalg.eigvalsh(cov)) < -1e-12:
            raise ConfigurationError("entry covariance is not positive semi-definite")
        if self.entry.heading_std < 0:
            raise ConfigurationError("heading_std must be non-negative")

    def position(self, fid: str) -> np.ndarray:
        return self.features[fid].position

    @property
    def obstacles(self) -> list[Feature]:
        return [f for f in self.features.values() if f.kind == "obstacle"]

    # JSON ------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "name": self.name,
            "features": [
                {"id": f.id, "x": float(f.position[0]), "y": float(f.position[1]), "kind": f.kind}
                for f in self.features.values()
            ],
            "corridor_bounds": {
                "upper": np.asarray(self.corridor_bounds[0]).tolist(),
                "lower": np.asarray(self.corridor_bounds[1]).tolist(),
            },
            "entry": {
                "line": [list(p) for p in self.entry.line],
                "mean": np.asarray(self.entry.mean).tolist(),
                "covariance": np.asarray(self.entry.covariance).tolist(),
                "heading_mean": self.entry.heading_mean,
                "heading_std": self.entry.heading_std,
            },
            "circle_feature": self.circle_feature,
            "memorized_sequence": [list(p) for p in self.memorized_sequence],
            "exit_x": self.exit_x,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Scenario":
        try:
            version = doc["schema_version"]
            if version != SCHEMA_VERSION:
                raise ConfigurationError(f"unsupported scenario schema_version {version!r}")
            feats = {}
            for f in doc["features"]:
                fid = str(f["id"])
                if fid in feats:
                    raise ConfigurationError(f"duplicate feature id {fid!r}")
                feats[fid] = Feature(fid, np.array([float(f["x"]), float(f["y"])]), f.get("kind", "tree"))
            e = doc["entry"]
            entry = EntryModel(
                line=tuple(tuple(map(float, p)) for p in e["line"]),
                mean=np.asarray(e["mean"], dtype=float),
                covariance=np.asarray(e["covariance"], dtype=float),
                heading_mean=float(e.get("heading_mean", 0.0)),
                heading_std=float(e.get("heading_std", 0.0)),
            )
            bounds = doc["corridor_bounds"]
            return cls(
                features=feats,
                corridor_bounds=(np.asarray(bounds["upper"], dtype=float), np.asarray(bounds["lower"], dtype=float)),
                entry=entry,
                memorized_sequence=[tuple(map(str, p)) for p in doc["memorized_sequence"]],
                circle_feature=str(doc["circle_feature"]),
                exit_x=float(doc.get("exit_x", 20.0)),
                name=str(doc.get("name", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(f"malformed scenario document: {exc}") from exc


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        return Scenario.from_dict(json.load(fh))


def default_scenario() -> Scenario:
    """The bundled corridor. Its layout is an approximate, hand-placed
    rendition of a wooded flight corridor, not surveyed geometry."""
    text = resources.files("loomnav").joinpath("data/corridor.json").read_text()
    return Scenario.from_dict(json.loads(text))


# --- configuration -----------------------------------------------------------

@dataclass(frozen=True)
class PairingParams:
    max_separation: float = 10.0
    min_covisibility: float = 20.0 / CAMERA_RATE_HZ

    def __post_init__(self):
        if not (self.max_separation > 0 and self.min_covisibility > 0):
            raise ConfigurationError("pairing thresholds must be positive")


@dataclass(frozen=True)
class Gains:
    follow: float = 1.0
    circle: float = 1.0
    distance: float = 0.5
    circle_radius: float = 1.5

    def __post_init__(self):
        if min(self.follow, self.circle, self.distance, self.circle_radius) <= 0:
            raise ConfigurationError("gains and circle radius must be positive")


@dataclass(frozen=True)
class EpisodeConfig:
    arrival_rate: float = 0.961
    horizon: float = 200.0
    dt: float = DEFAULT_DT
    speed_mean: float = DEFAULT_SPEED
    speed_std: float = 0.0
    gains: Gains = field(default_factory=Gains)
    pairing: PairingParams = field(default_factory=PairingParams)
    rng_seed: int = 0
    max_agents: int | None = None
    arrival_times: tuple[float, ...] | None = None
    min_dwell: float = 0.1
    panic_time: float = 1.0
    panic_half_angle: float = math.radians(15.0)
    abeam_angle: float = 0.2
    max_flight_time: float = 10.0
    max_curvature: float | None = 2.0

    def __post_init__(self):
        if not (self.arrival_rate > 0 and self.horizon > 0 and self.dt > 0 and self.speed_mean > 0):
            raise ConfigurationError("rate, horizon, dt and speed must be positive")
        if self.speed_std < 0 or self.min_dwell < 0:
            raise ConfigurationError("speed_std and min_dwell must be non-negative")
        if self.max_curvature is not None and not self.max_curvature > 0:
            raise ConfigurationError("max_curvature must be positive")
        if self.max_agents is not None and self.max_agents < 0:
            raise ConfigurationError("max_agents must be non-negative")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema_version"] = SCHEMA_VERSION
        if d["arrival_times"] is not None:
            d["arrival_times"] = list(d["arrival_times"])
        return d

    @classmethod
    def from_dict(cls, doc: dict) -> "EpisodeConfig":
        doc = dict(doc)
        version = doc.pop("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigurationError(f"unsupported config schema_version {version!r}")
        try:
            if "gains" in doc:
                doc["gains"] = Gains(**doc["gains"])
            if "pairing" in doc:
                doc["pairing"] = PairingParams(**doc["pairing"])
            if doc.get("arrival_times") is not None:
                doc["arrival_times"] = tuple(float(t) for t in doc["arrival_times"])
            return cls(**doc)
        except TypeError as exc:
            raise ConfigurationError(f"malformed episode config: {exc}") from exc


def load_config(path) -> EpisodeConfig:
    with open(path) as fh:
        return EpisodeConfig.from_dict(json.load(fh))


# --- leader detection --------------------------------------------------------

class AgentView(NamedTuple):
    agent_id: int | str
    emergence_time: float
    active_since: float
    position: np.ndarray
    tangent: np.ndarray


def detect_leader(ego: AgentView, others: Iterable[AgentView], params: PairingParams,
                  now: float) -> int | str | None:
    """Nearest agent that emerged before ``ego``, has been co-active with it
    for at least ``min_covisibility``, is within ``max_separation`` and is
    ahead along ego's heading."""
    best, best_d = None, math.inf
    for o in others:
        if o.agent_id == ego.agent_id or not o.emergence_time < ego.emergence_time:
            continue
        if now - max(o.active_since, ego.active_since) < params.min_covisibility - 1e-9:
            continue
        r = o.position - ego.position
        d = math.hypot(r[0], r[1])
        if not d < params.max_separation:
            continue
        if float(r @ ego.tangent) <= EPS_FRONT:
            continue
        if d < best_d:
            best, best_d = o.agent_id, d
    return best


# --- primitive selection -----------------------------------------------------

@dataclass(frozen=True)
class Mode:
    """Active primitive plus where the agent is in the switching sequence.

    ``stage`` 0 is the leader/circling stage; stage ``i >= 1`` runs the
    ``i``-th memorized pair. ``override`` marks a collision-course circle.
    """
    law: ControlLaw
    stage: int
    since: float
    override: bool = False
    reason: str = "start"


def _along(target: np.ndarray, ego: VehicleState) -> float:
    return float((target - ego.position) @ ego.tangent)


def forward_distance(target: np.ndarray, ego: VehicleState) -> float:
    """Distance ahead along the heading; infinite once the target is behind."""
    r_x = _along(target, ego)
    return r_x if r_x > EPS_FRONT else math.inf


def _nearer(trigger: np.ndarray, reference: np.ndarray, ego: VehicleState) -> bool:
    return forward_distance(trigger, ego) < forward_distance(reference, ego)


def _is_abeam_or_behind(target: np.ndarray, ego: VehicleState, abeam_angle: float) -> bool:
    r = target - ego.position
    return float(r @ ego.tangent) <= math.hypot(r[0], r[1]) * math.sin(abeam_angle)


def _collision_obstacle(ego: VehicleState, scenario: Scenario, cfg: EpisodeConfig) -> str | None:
    """Obstacle whose time-to-transit is under ``panic_time`` inside the
    heading cone, nearest first."""
    hit, hit_rx = None, math.inf
    for f in scenario.obstacles:
        r = f.position - ego.position
        r_x = float(r @ ego.tangent)
        if r_x <= EPS_FRONT:
            continue
        if abs(math.atan2(float(r @ ego.normal), r_x)) > cfg.panic_half_angle:
            continue
        if ego.speed / r_x > 1.0 / cfg.panic_time and r_x < hit_rx:
            hit, hit_rx = f.id, r_x
    return hit


def _stage_law(stage: int, scenario: Scenario, cfg: EpisodeConfig, leader) -> ControlLaw:
    g = cfg.gains
    if stage == 0:
        if leader is not None:
            return ControlLaw(Kind.FOLLOW, g.follow, (leader[0],))
        return ControlLaw(Kind.CIRCLE, g.circle, (scenario.circle_feature,))
    return ControlLaw(Kind.DISTANCE_MAINTAIN, g.distance, tuple(scenario.memorized_sequence[stage - 1]))


def select_primitive(ego: VehicleState, scenario: Scenario, leader, mode: Mode | None,
                     now: float, cfg: EpisodeConfig, force: bool = False) -> Mode:
    """Next mode for an agent.

    ``leader`` is ``(agent_id, VehicleState)`` or None. Switches other than
    forced ones wait until the current primitive has run ``cfg.min_dwell``
    seconds. Raises :class:`EndOfCorridor` once the last memorized pair is
    behind and no leader is present.
    """
    pole = scenario.position(scenario.circle_feature)
    seq = scenario.memorized_sequence

    if mode is None:
        stage = 0 if not _is_abeam_or_behind(pole, ego, cfg.abeam_angle) or leader is not None else 1
        return Mode(_stage_law(stage, scenario, cfg, leader), stage, now, reason="start")

    if not force and now - mode.since < cfg.min_dwell:
        return mode

    def new(law, stage, reason, override=False):
        if law == mode.law and override == mode.override and stage == mode.stage:
            return mode
        return Mode(law, stage, now, override, reason)

    # collision course pre-empts everything
    threat = _collision_obstacle(ego, scenario, cfg)
    if threat is not None and not (mode.law.kind is Kind.CIRCLE and mode.law.targets[0] == threat):
        return new(ControlLaw(Kind.CIRCLE, cfg.gains.circle, (threat,)), mode.stage, f"collision course with {threat}", True)
    if mode.override:
        obst = scenario.position(mode.law.targets[0])
        if not _is_abeam_or_behind(obst, ego, cfg.abeam_angle):
            return mode
        if mode.stage == 0 and leader is None and _is_abeam_or_behind(pole, ego, cfg.abeam_angle):
            return new(_stage_law(1, scenario, cfg, None), 1, "obstacle passed")
        return new(_stage_law(mode.stage, scenario, cfg, leader), mode.stage, "obstacle passed")

    stage = mode.stage
    law = mode.law
    if stage == 0:
        b = scenario.position(seq[0][0])
        if law.kind is Kind.FOLLOW:
            if leader is None:
                if _is_abeam_or_behind(pole, ego, cfg.abeam_angle):
                    return new(_stage_law(1, scenario, cfg, None), 1, "leader lost")
                return new(_stage_law(0, scenario, cfg, None), 0, "leader lost")
            if _nearer(b, leader[1].position, ego):
                return new(_stage_law(1, scenario, cfg, None), 1, f"{seq[0][0]} nearer than leader")
            if leader[0] != law.targets[0]:
                return new(_stage_law(0, scenario, cfg, leader), 0, "new leader")
            return mode
        # circling the first obstacle
        if leader is not None:
            return new(_stage_law(0, scenario, cfg, leader), 0, "leader detected")
        if _is_abeam_or_behind(pole, ego, cfg.abeam_angle):
            return new(_stage_law(1, scenario, cfg, None), 1, f"{scenario.circle_feature} passed")
        if _nearer(b, pole, ego):
            return new(_stage_law(1, scenario, cfg, None), 1, f"{seq[0][0]} nearer than {scenario.circle_feature}")
        return mode

    # memorized chain
    first, second = seq[stage - 1]
    if stage < len(seq):
        nxt = seq[stage][1]
        if _nearer(scenario.position(nxt), scenario.position(first), ego):
            return new(_stage_law(stage + 1, scenario, cfg, None), stage + 1, f"{nxt} nearer than {first}")
        return mode
    if _along(scenario.position(first), ego) <= EPS_FRONT and _along(scenario.position(second), ego) <= EPS_FRONT:
        raise EndOfCorridor("last memorized pair is behind")
    return mode


def turn_back(target: np.ndarray, ego: VehicleState) -> float:
    """Pure-pursuit curvature ``2 sin(bearing) / |r|`` toward ``target``.

    Used when an agent faces away from a memorized pair it has not reached
    yet (typically after losing a leader that turned), so that the pair is
    not mistaken for one already flown past.
    """
    r = target - ego.position
    rho = math.hypot(r[0], r[1])
    b = math.atan2(float(r @ ego.normal), float(r @ ego.tangent))
    return 2.0 * math.sin(b) / rho if abs(b) < math.pi / 2 else math.copysign(2.0 / rho, b)


def evaluate(mode: Mode, ego: VehicleState, scenario: Scenario, cfg: EpisodeConfig, states: dict) -> float:
    """Curvature commanded by ``mode``; ``states`` maps agent ids to their
    current states (needed by the following law)."""
    law = mode.law
    if law.kind is Kind.FOLLOW:
        return steering.follow_control(states[law.targets[0]], ego, law.gain)
    if law.kind is Kind.CIRCLE:
        f = scenario.position(law.targets[0])
        return steering.circling_control(f, ego, law.gain, steering.circle_setpoint(ego.speed, cfg.gains.circle_radius))
    if law.kind is Kind.DISTANCE_MAINTAIN:
        f1, f2 = (scenario.position(t) for t in law.targets)
        mid = 0.5 * (f1 + f2)
        if _along(f1, ego) <= EPS_FRONT and _along(f2, ego) <= EPS_FRONT and mid[0] > ego.position[0]:
            return turn_back(mid, ego)
        return steering.distance_maintenance_control(f1, f2, ego, law.gain)
    raise ConfigurationError(f"{law.kind.value} is not a navigation primitive")


# --- episodes ------------------------------------------------------------------

@dataclass
class _Agent:
    agent_id: int
    arrival: float
    spawn_index: int
    state: VehicleState
    mode: Mode | None = None
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    controls: list = field(default_factory=list)
    labels: list = field(default_factory=list)
    leaders: list = field(default_factory=list)
    switches: list = field(default_factory=list)
    end_reason: str = ""


def arrival_times(cfg: EpisodeConfig) -> np.ndarray:
    if cfg.arrival_times is not None:
        t = np.sort(np.asarray(cfg.arrival_times, dtype=float))
    else:
        t = sample_poisson(cfg.arrival_rate, (0.0, cfg.horizon), stream(cfg.rng_seed, "arrivals")).times
    if cfg.max_agents is not None:
        t = t[: cfg.max_agents]
    return t


def sample_entry(scenario: Scenario, cfg: EpisodeConfig, index: int) -> VehicleState:
    rng = stream(cfg.rng_seed, "entry", index)
    e = scenario.entry
    pos = rng.multivariate_normal(np.asarray(e.mean, dtype=float), np.asarray(e.covariance, dtype=float), method="eigh")
    heading = e.heading_mean + e.heading_std * rng.standard_normal()
    speed = cfg.speed_mean + cfg.speed_std * rng.standard_normal()
    return VehicleState.from_heading(pos, heading, max(speed, 0.1 * cfg.speed_mean))


def run_episode(scenario: Scenario, config: EpisodeConfig) -> list[Trajectory]:
    """Simulate every arriving agent until it leaves the corridor.

    Each returned trajectory carries per-sample ``u``, ``primitive`` and
    ``leader_id`` lists plus a ``switches`` log in ``meta``.
    """
    scenario.validate()
    cfg = config
    dt = cfg.dt
    arrivals = arrival_times(cfg)
    pending = [
        _Agent(i, float(a), int(math.ceil(a / dt - 1e-9)), sample_entry(scenario, cfg, i))
        for i, a in enumerate(arrivals)
    ]
    pending.reverse()
    active: list[_Agent] = []
    done: list[_Agent] = []
    max_steps = int(math.ceil(cfg.max_flight_time / dt))
    n = pending[-1].spawn_index if pending else 0

    while pending or active:
        if not active and pending and pending[-1].spawn_index > n:
            n = pending[-1].spawn_index
        while pending and pending[-1].spawn_index <= n:
            active.append(pending.pop())
        now = n * dt

        views = {
            a.agent_id: AgentView(a.agent_id, a.arrival, a.spawn_index * dt, a.state.position, a.state.tangent)
            for a in active
        }
        states = {a.agent_id: a.state for a in active}
        controls = {}
        finished = []
        for a in active:
            ego = a.state
            lid = detect_leader(views[a.agent_id], views.values(), cfg.pairing, now)
            leader = (lid, states[lid]) if lid is not None else None
            try:
                if ego.position[0] > scenario.exit_x:
                    raise EndOfCorridor("crossed the exit line")
                if n - a.spawn_index >= max_steps:
                    raise EndOfCorridor("flight time limit")
                mode = _next_mode(a, ego, scenario, leader, now, cfg, states)
                u = _evaluate_or_advance(a, mode, ego, scenario, leader, now, cfg, states)
            except EndOfCorridor as exc:
                a.end_reason = str(exc)
                _record(a, now, ego, 0.0, "End", None)
                finished.append(a)
                continue
            if cfg.max_curvature is not None:
                u = max(-cfg.max_curvature, min(cfg.max_curvature, u))
            controls[a.agent_id] = u
            _record(a, now, ego, u, a.mode.law.label(), lid)

        for a in finished:
            active.remove(a)
            done.append(a)
        for a in active:
            a.state = step(a.state, controls[a.agent_id], dt)
        n += 1

    done.sort(key=lambda a: a.agent_id)
    out = []
    for a in done:
        traj = Trajectory(a.agent_id, np.array(a.times), a.states, a.arrival)
        traj.meta.update(u=a.controls, primitive=a.labels, leader_id=a.leaders,
                         switches=a.switches, end_reason=a.end_reason)
        out.append(traj)
    return out


def _next_mode(a: _Agent, ego, scenario, leader, now, cfg, states) -> Mode:
    force = False
    if a.mode is not None and a.mode.law.kind is Kind.FOLLOW and a.mode.law.targets[0] not in states:
        force = True  # the followed agent has left the corridor
    mode = select_primitive(ego, scenario, leader, a.mode, now, cfg, force=force)
    if mode.law.kind is Kind.FOLLOW and mode.law.targets[0] not in states:
        mode = select_primitive(ego, scenario, None, mode, now, cfg, force=True)
    _set_mode(a, mode, now)
    return mode


def _set_mode(a: _Agent, mode: Mode, now: float) -> None:
    if a.mode is not mode:
        a.switches.append((now, a.mode.law.label() if a.mode else "", mode.law.label(), mode.reason))
        a.mode = mode


def _evaluate_or_advance(a, mode, ego, scenario, leader, now, cfg, states) -> float:
    # a target that slipped behind between checks forces the next stage
    for _ in range(len(scenario.memorized_sequence) + 2):
        try:
            return evaluate(a.mode, ego, scenario, cfg, states)
        except TargetPassedError:
            m = a.mode
            if m.override:
                nxt = replace(m, override=False, law=_stage_law(m.stage, scenario, cfg, leader),
                              since=now, reason="obstacle passed")
            elif m.stage < len(scenario.memorized_sequence):
                nxt = Mode(_stage_law(m.stage + 1, scenario, cfg, None), m.stage + 1, now, reason="target passed")
            else:
                raise EndOfCorridor("last memorized pair is behind")
            _set_mode(a, nxt, now)
    raise EndOfCorridor("no computable primitive")


def _record(a: _Agent, t, state, u, label, leader_id) -> None:
    a.times.append(t)
    a.states.append(state)
    a.controls.append(u)
    a.labels.append(label)
    a.leaders.append(leader_id)
