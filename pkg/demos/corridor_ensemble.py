"""Agents threading a corridor of landmarks, alone or behind a leader.

Agents arrive as a Poisson stream, fly the memorized landmark sequence
with distance maintenance and circling, and switch to loom-nulling
following whenever a suitable leader is ahead. Agents are then grouped by
whether a leader was ever detected ahead of them (G2) or not (G1); over the
stretch where following happens, G2 rides higher in the corridor than G1,
across seeds.
"""

import sys

from _out import out_dir
from loomnav.analysis import classify_roles, ensemble_stats, follower_effect, role_counts
from loomnav.strategy import EpisodeConfig, default_scenario, run_episode
from loomnav.svg import stats_svg, trajectories_svg

seeds = range(int(sys.argv[1]) if len(sys.argv) > 1 else 5)
scenario = default_scenario()
out = out_dir("corridor_ensemble")
for seed in seeds:
    trajs = run_episode(scenario, EpisodeConfig(rng_seed=seed, max_agents=100))
    effect = follower_effect(trajs)
    counts = role_counts(classify_roles(trajs))
    stats = ensemble_stats(trajs)
    print(f"seed {seed}: roles {counts}; over x in [{effect.x_range[0]:.2f}, {effect.x_range[1]:.2f}] "
          f"G1 mean y {effect.g1_mean_y:+.2f} m (n={effect.g1_count}), "
          f"G2 mean y {effect.g2_mean_y:+.2f} m (n={effect.g2_count})")
    if seed == seeds[0]:
        (out / "trajectories.svg").write_text(trajectories_svg(trajs, scenario))
        (out / "ellipses.svg").write_text(stats_svg(stats, trajs=trajs))
print(f"wrote plots to {out}")
