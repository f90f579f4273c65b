"""Command-line entry point.

Subcommands: simulate, stats, classify, emergence, replay. Every command
writes a ``manifest.json`` next to its outputs; ``replay`` reruns a manifest
and reproduces the same bytes.

Exit codes: 0 success, 2 input or schema error, 3 statistical precondition
not met, 4 I/O error.
"""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import classify_pursuit, classify_roles, ensemble_stats, make_pair, pursuit_measures, role_counts
from .analysis.io import episode_csv, fmt, read_trajectories, stats_csv, switch_log_csv
from .analysis.roles import leader_relation
from .analysis.smoothing import smooth
from .emergence import (EmergenceSequence, interval_probabilities, ks_test_poisson, rate_curve, read_times_csv,
                        sample_poisson)
from .errors import LoomNavError, StatisticalPreconditionError, UnpairedInputError
from .rng import derive_seed
from .strategy import EpisodeConfig, PairingParams, Scenario, default_scenario, load_config, run_episode
from .svg import series_svg, stats_svg, trajectories_svg

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_STATS = 3
EXIT_IO = 4
OUT_ENV = "LOOMNAV_OUT"
DEFAULT_AGENTS = 100


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int | None
    tool_version: str = __version__
    outputs: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        doc = {"command": self.command, "config": self.config, "seed": self.seed,
               "tool_version": self.tool_version, "outputs": sorted(self.outputs)}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def load(cls, path) -> "RunManifest":
        with open(path) as fh:
            doc = json.load(fh)
        try:
            return cls(doc["command"], doc["config"], doc["seed"], doc["tool_version"], list(doc["outputs"]))
        except (KeyError, TypeError) as exc:
            raise _InputError(f"{path}: not a run manifest") from exc


class _InputError(LoomNavError):
    pass


class Output:
    """Collects files written under one directory, each written atomically."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.written: list[str] = []

    def write(self, rel: str, text: str) -> None:
        path = self.root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.written.append(rel)

    def manifest(self, command: str, config: dict, seed) -> RunManifest:
        m = RunManifest(command, config, seed, outputs=list(self.written))
        self.write("manifest.json", m.to_json())
        return m


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUT_ENV) or "loomnav_out")


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(str(v) for v in r) for r in rows)
    return "\n".join(lines) + "\n"


# --- simulate ----------------------------------------------------------------

def _simulate(cfg: dict, out: Output) -> None:
    scenario = Scenario.from_dict(cfg["scenario"])
    base = EpisodeConfig.from_dict(cfg["episode"])
    for e in range(cfg["n_episodes"]):
        ep = replace(base, rng_seed=derive_seed(cfg["seed"], "episode", e))
        trajs = run_episode(scenario, ep)
        d = f"episode_{e:03d}"
        for tr in trajs:
            out.write(f"{d}/agent_{tr.agent_id:04d}.csv", episode_csv(tr))
        out.write(f"{d}/switches.csv", switch_log_csv(trajs))
        out.write(f"{d}/trajectories.svg", trajectories_svg(trajs, scenario))


def cmd_simulate(args) -> int:
    scenario = Scenario.from_dict(_load_json(args.scenario)) if args.scenario else default_scenario()
    episode = load_config(args.config) if args.config else EpisodeConfig()
    if args.agents is not None:
        episode = replace(episode, max_agents=args.agents)
    elif episode.max_agents is None:
        episode = replace(episode, max_agents=DEFAULT_AGENTS)
    if args.n_episodes < 0:
        raise _InputError("--n-episodes must be non-negative")
    cfg = {"scenario": scenario.to_dict(), "episode": episode.to_dict(), "seed": args.seed,
           "n_episodes": args.n_episodes}
    out = Output(_out_dir(args))
    _simulate(cfg, out)
    out.manifest("simulate", cfg, args.seed)
    print(f"simulate: {args.n_episodes} episode(s) -> {out.root}")
    return EXIT_OK


# --- stats -------------------------------------------------------------------

def _expand(patterns) -> list[str]:
    files = []
    for p in patterns:
        hits = sorted(glob.glob(p, recursive=True))
        if not hits:
            raise FileNotFoundError(f"no file matches {p!r}")
        files.extend(hits)
    seen = set()
    return [f for f in files if not (f in seen or seen.add(f))]


def _load_tracks(files) -> list:
    trajs = []
    for f in files:
        trajs.extend(read_trajectories(f, default_id=Path(f).stem))
    return trajs


def _stats(cfg: dict, out: Output) -> None:
    trajs = _load_tracks(cfg["inputs"])
    F = cfg["smooth"]
    if F is not None:
        trajs = [smooth(t, F) for t in trajs]
    st = ensemble_stats(trajs, cfg["step"])
    out.write("stats.csv", stats_csv(st))
    out.write("stats.svg", stats_svg(st, trajs=trajs))


def cmd_stats(args) -> int:
    cfg = {"inputs": _expand(args.inputs), "step": args.step, "smooth": None if args.no_smooth else args.smooth}
    out = Output(_out_dir(args))
    _stats(cfg, out)
    out.manifest("stats", cfg, None)
    print(f"stats: {len(cfg['inputs'])} file(s) -> {out.root / 'stats.csv'}")
    return EXIT_OK


# --- classify ----------------------------------------------------------------

def _classify(cfg: dict, out: Output) -> str:
    trajs = _load_tracks(cfg["inputs"])
    by_id = {str(t.agent_id): t for t in trajs}
    pairing = PairingParams(**cfg["pairing"])
    roles = classify_roles(trajs, pairing)

    if cfg["pairs"]:
        pairs = []
        for lid, fid in cfg["pairs"]:
            if lid not in by_id or fid not in by_id:
                raise UnpairedInputError(f"pair {lid}->{fid}: unknown track id")
            pairs.append((lid, fid))
    else:
        led_by = leader_relation(trajs, pairing)
        pairs = sorted(((str(l), str(f)) for f, ls in led_by.items() for l in ls), key=lambda p: (p[1], p[0]))

    rows, angle_rows = [], []
    for lid, fid in pairs:
        pair = make_pair(by_id[lid], by_id[fid], cfg["smooth"])
        try:
            label = classify_pursuit(pair, cfg["tol_bearing"], cfg["tol_std"]).value
            m = pursuit_measures(pair)
            stats = [fmt(m["mean_abs_bearing"]), fmt(m["std_bearing"]), fmt(m["std_baseline"])]
        except StatisticalPreconditionError:
            label, stats = "TooShort", ["", "", ""]
        rows.append([lid, fid, label, fmt(pair.initial_distance), *stats])
        for t, b, a in zip(pair.times, pair.baseline_angle, pair.bearing_angle):
            angle_rows.append([lid, fid, fmt(t), fmt(b), fmt(a)])
        if cfg["plots"]:
            out.write(f"angles_{lid}_{fid}.svg",
                      series_svg(pair.times, {"baseline angle": pair.baseline_angle,
                                              "bearing angle": pair.bearing_angle}))

    counts = role_counts(roles)
    out.write("pursuit.csv", _csv(["leader", "follower", "class", "initial_distance", "mean_abs_bearing",
                                   "std_bearing", "std_baseline"], rows))
    out.write("angles.csv", _csv(["leader", "follower", "t", "baseline_angle", "bearing_angle"], angle_rows))
    out.write("roles.csv", _csv(["agent_id", "role", "group"],
                                [[t.agent_id, roles[t.agent_id].value, roles[t.agent_id].group] for t in trajs]))
    lines = ["role counts: " + " ".join(f"{k}={v}" for k, v in counts.items()),
             f"groups: G1={counts['C1'] + counts['C2']} G2={counts['C3'] + counts['C4']}",
             "pursuit:"]
    lines += [f"  {r[0]} -> {r[1]}: {r[2]}" for r in rows] or ["  (no pairs)"]
    report = "\n".join(lines) + "\n"
    out.write("report.txt", report)
    return report


def cmd_classify(args) -> int:
    cfg = {
        "inputs": _expand(args.inputs),
        "pairs": [list(p) for p in (args.pair or [])],
        "pairing": {"max_separation": args.max_separation, "min_covisibility": args.min_covisibility},
        "smooth": None if args.no_smooth else args.smooth,
        "tol_bearing": args.tol_bearing,
        "tol_std": args.tol_std,
        "plots": args.plots,
    }
    out = Output(_out_dir(args))
    report = _classify(cfg, out)
    out.manifest("classify", cfg, None)
    sys.stdout.write(report)
    return EXIT_OK


# --- emergence ---------------------------------------------------------------

def _emergence(cfg: dict, out: Output) -> str:
    if cfg["times"] is not None:
        times = read_times_csv(cfg["times"])
        window = cfg["window"] or ([float(times[0]), float(times[-1])] if len(times) else [0.0, 0.0])
        seq = EmergenceSequence(times, tuple(window))
        rate = cfg["rate"] or (len(seq) / seq.duration if seq.duration > 0 else 0.0)
    else:
        seq = sample_poisson(cfg["rate"], tuple(cfg["window"]), cfg["seed"])
        rate = cfg["rate"]
    ks = ks_test_poisson(seq, cfg["alpha"])
    starts, rates = rate_curve(seq, cfg["T"], cfg["step"])
    out.write("rate_curve.csv", _csv(["t", "rate"], [[fmt(a), fmt(b)] for a, b in zip(starts, rates)]))
    probs = interval_probabilities(rate) if rate > 0 else (float("nan"),) * 3
    out.write("interval_probabilities.csv", _csv(["p0", "p1", "p2plus"], [[fmt(p) for p in probs]]))
    if cfg["times"] is None:
        out.write("times.csv", _csv(["t"], [[fmt(t)] for t in seq.times]))
    report = (f"arrivals: {ks.n}\nrate: {rate:.6g}\n"
              f"KS statistic: {ks.statistic:.6f}\nKS p-value: {ks.p_value:.6f}\n"
              f"KS at {cfg['alpha']:g}: {'pass' if ks.passed else 'fail'}\n"
              f"P(0)={probs[0]:.4f} P(1)={probs[1]:.4f} P(>=2)={probs[2]:.4f}\n")
    out.write("ks_report.txt", report)
    return report


def cmd_emergence(args) -> int:
    if args.times is None and (args.rate is None or args.window is None):
        raise _InputError("give a times CSV or --rate and --window")
    cfg = {"times": args.times, "rate": args.rate, "window": args.window, "seed": args.seed,
           "T": args.T, "step": args.step, "alpha": args.alpha}
    out = Output(_out_dir(args))
    report = _emergence(cfg, out)
    out.manifest("emergence", cfg, args.seed)
    sys.stdout.write(report)
    return EXIT_OK


# --- replay ------------------------------------------------------------------

_RUNNERS = {"simulate": _simulate, "stats": _stats, "classify": _classify, "emergence": _emergence}


def cmd_replay(args) -> int:
    m = RunManifest.load(args.manifest)
    if m.command not in _RUNNERS:
        raise _InputError(f"cannot replay command {m.command!r}")
    out = Output(_out_dir(args))
    _RUNNERS[m.command](m.config, out)
    out.manifest(m.command, m.config, m.seed)
    print(f"replay {m.command} -> {out.root}")
    return EXIT_OK


# --- argument parsing --------------------------------------------------------

def _load_json(path) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise _InputError(f"{path}: invalid JSON ({exc})") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="loomnav", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def out_flag(q):
        q.add_argument("--out", help=f"output directory (default: ${OUT_ENV} or ./loomnav_out)")

    s = sub.add_parser("simulate", help="simulate corridor episodes")
    s.add_argument("--scenario", help="scenario JSON (default: built-in corridor)")
    s.add_argument("--config", help="episode config JSON")
    s.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    s.add_argument("--n-episodes", type=int, default=1, help="number of episodes (default 1)")
    s.add_argument("--agents", type=int, help=f"agents per episode (default {DEFAULT_AGENTS})")
    out_flag(s)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("stats", help="mean path and variance ellipses")
    s.add_argument("inputs", nargs="+", help="trajectory CSV files or glob patterns")
    s.add_argument("--step", type=float, default=0.1, help="arc-length sample spacing in m (default 0.1)")
    s.add_argument("--smooth", type=float, default=0.85, help="smoothing factor F in [0, 1] (default 0.85)")
    s.add_argument("--no-smooth", action="store_true", help="use the raw tracks")
    out_flag(s)
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("classify", help="leader/follower roles and pursuit-law tests")
    s.add_argument("inputs", nargs="+", help="trajectory CSV files or glob patterns")
    s.add_argument("--pair", nargs=2, action="append", metavar=("LEADER", "FOLLOWER"),
                   help="explicit pair of track ids (repeatable); default pairs by leader detection")
    s.add_argument("--max-separation", type=float, default=PairingParams().max_separation,
                   help="largest leader distance in m for automatic pairing")
    s.add_argument("--min-covisibility", type=float, default=PairingParams().min_covisibility,
                   help="seconds a leader must be in view before it counts")
    s.add_argument("--smooth", type=float, default=0.85, help="smoothing factor F in [0, 1] (default 0.85)")
    s.add_argument("--no-smooth", action="store_true", help="classify the raw tracks")
    s.add_argument("--tol-bearing", type=float, default=0.1, help="classical pursuit: mean |bearing| bound (rad)")
    s.add_argument("--tol-std", type=float, default=0.1, help="bearing / baseline std bound (rad)")
    s.add_argument("--plots", action="store_true", help="write an angle-series SVG per pair")
    out_flag(s)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("emergence", help="emergence rate curve, KS test, interval probabilities")
    s.add_argument("--times", help="single-column CSV of emergence times")
    s.add_argument("--rate", type=float, help="sample a Poisson sequence at this rate (1/s) instead")
    s.add_argument("--window", type=float, nargs=2, metavar=("START", "END"),
                   help="observation window in s (default: span of --times)")
    s.add_argument("--seed", type=int, default=0, help="seed for --rate sampling")
    s.add_argument("--T", type=float, default=120.0, help="sliding window length in seconds")
    s.add_argument("--step", type=float, default=1.0, help="spacing of window starts in s")
    s.add_argument("--alpha", type=float, default=0.05, help="KS significance level")
    out_flag(s)
    s.set_defaults(func=cmd_emergence)

    s = sub.add_parser("replay", help="rerun a manifest")
    s.add_argument("manifest", help="manifest.json written by an earlier run")
    out_flag(s)
    s.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StatisticalPreconditionError as exc:
        print(f"loomnav: {exc}", file=sys.stderr)
        return EXIT_STATS
    except LoomNavError as exc:
        print(f"loomnav: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"loomnav: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError, TypeError) as exc:
        print(f"loomnav: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
