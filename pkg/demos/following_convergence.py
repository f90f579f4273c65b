"""Following a straight-flying leader by nulling the virtual loom.

The follower steers with u = k (x_l . y_f), which turns it toward the
leader's heading. The Lyapunov value V = 1 - x_l . x_f never increases and
decays to zero from any start except exactly anti-parallel, while the
virtual loom stays equal to V v / r_x whenever the leader is in front.
"""

import math

import numpy as np

from _out import out_dir
from loomnav import DEFAULT_DT, DEFAULT_SPEED, VehicleState, follow_control, lyapunov_value, step
from loomnav.errors import LeaderNotInFrontError
from loomnav.perception import virtual_loom
from loomnav.svg import series_svg

v = DEFAULT_SPEED
series = {}
for h0 in (0.5, 1.5, 2.5, 3.0):
    lead = VehicleState.from_heading((30 * math.cos(h0), 30 * math.sin(h0)), 0.0, v)
    fol = VehicleState.from_heading((0.0, 0.0), h0, v)
    t, vals, looms = [], [], []
    for i in range(int(6.0 / DEFAULT_DT)):
        t.append(i * DEFAULT_DT)
        vals.append(lyapunov_value(lead, fol))
        try:
            looms.append(virtual_loom(lead, fol))
        except LeaderNotInFrontError:
            looms.append(math.nan)
        fol = step(fol, follow_control(lead, fol, 1.0), DEFAULT_DT)
        lead = step(lead, 0.0, DEFAULT_DT)
    vals = np.array(vals)
    below = np.flatnonzero(vals < 1e-6)
    settle = t[below[0]] if len(below) else math.inf
    print(f"misalignment {h0:.1f} rad: V {vals[0]:.3f} -> {vals[-1]:.1e}, "
          f"largest rise {max(0.0, np.diff(vals).max()):.1e}, V < 1e-6 after {settle:.2f} s")
    series[f"V, start {h0:.1f} rad"] = vals

path = out_dir("following_convergence") / "lyapunov.svg"
path.write_text(series_svg(np.array(t), series))
print(f"wrote {path}")
