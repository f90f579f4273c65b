"""Telling pursuit strategies apart from a pair of tracks.

Each reference law is run in closed loop against a weaving leader, then the
pair is smoothed and classified from its angle series alone: classical
pursuit keeps the bearing near zero, constant bearing keeps it steady and
motion camouflage keeps the baseline direction steady. A loom-nulling
follower behind a leader on a tightening turn matches none of them.
"""

from _out import out_dir
from loomnav.analysis import classify_pursuit, make_pair, pursuit_measures
from loomnav.svg import series_svg, trajectories_svg
from loomnav.synth import LAWS, pursuit_pair

out = out_dir("pursuit_classification")
for law in LAWS:
    leader, follower = pursuit_pair(law)
    pair = make_pair(leader, follower)
    m = pursuit_measures(pair)
    print(f"{law:18s} -> {classify_pursuit(pair).value:17s} "
          + "  ".join(f"{k}={v:.4f}" for k, v in m.items()))
    (out / f"{law}_paths.svg").write_text(trajectories_svg([leader, follower]))
    (out / f"{law}_angles.svg").write_text(
        series_svg(pair.times, {"baseline": pair.baseline_angle, "bearing": pair.bearing_angle}))
print(f"wrote plots to {out}")
