"""Minimal SVG plots with deterministic output.

Numbers are printed with fixed precision and elements are emitted in input
order, so identical data always gives identical bytes.
"""

from __future__ import annotations

import math

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
PRIMITIVE_COLORS = {"Follow": "#d62728", "Circle": "#2ca02c", "DistanceMaintain": "#1f77b4"}


def _n(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


class Canvas:
    """World-to-pixel mapping with y pointing up."""

    def __init__(self, xlim, ylim, width=800, margin=30):
        x0, x1 = xlim
        y0, y1 = ylim
        if x1 <= x0:
            x1 = x0 + 1.0
        if y1 <= y0:
            y1 = y0 + 1.0
        self.x0, self.y1 = x0, y1
        self.scale = (width - 2 * margin) / (x1 - x0)
        self.margin = margin
        self.width = width
        self.height = int(math.ceil((y1 - y0) * self.scale + 2 * margin))
        self.items: list[str] = []

    def px(self, x, y):
        return self.margin + (x - self.x0) * self.scale, self.margin + (self.y1 - y) * self.scale

    def polyline(self, pts, color="#000000", width=1.0, opacity=1.0):
        coords = " ".join(f"{_n(a)},{_n(b)}" for a, b in (self.px(x, y) for x, y in pts))
        self.items.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                          f'stroke-width="{_n(width)}" stroke-opacity="{_n(opacity)}"/>')

    def circle(self, x, y, r_px, color="#000000"):
        a, b = self.px(x, y)
        self.items.append(f'<circle cx="{_n(a)}" cy="{_n(b)}" r="{_n(r_px)}" fill="{color}"/>')

    def ellipse(self, x, y, a_len, b_len, angle, color="#888888"):
        cx, cy = self.px(x, y)
        deg = -math.degrees(angle)
        self.items.append(
            f'<ellipse cx="{_n(cx)}" cy="{_n(cy)}" rx="{_n(a_len * self.scale)}" ry="{_n(b_len * self.scale)}" '
            f'transform="rotate({_n(deg)} {_n(cx)} {_n(cy)})" fill="none" stroke="{color}" stroke-width="0.5"/>')

    def text(self, x, y, s, size=10):
        a, b = self.px(x, y)
        self.items.append(f'<text x="{_n(a)}" y="{_n(b)}" font-size="{size}" font-family="sans-serif">{s}</text>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">\n'
                f'<rect width="100%" height="100%" fill="#ffffff"/>\n')
        return head + "\n".join(self.items) + "\n</svg>\n"


def _limits(arrays, pad=0.5):
    pts = np.vstack(arrays)
    lo = pts.min(axis=0) - pad
    hi = pts.max(axis=0) + pad
    return (lo[0], hi[0]), (lo[1], hi[1])


def _scenario_layer(c: Canvas, scenario) -> None:
    for name in ("upper", "lower"):
        bound = scenario.corridor_bounds[0 if name == "upper" else 1]
        c.polyline(bound, "#444444", 1.5)
    for name, f in scenario.features.items():
        c.circle(f.position[0], f.position[1], 4, "#000000")
        c.text(f.position[0] + 0.15, f.position[1] + 0.15, name)


def trajectories_svg(trajs, scenario=None) -> str:
    """Flight paths, coloured by the primitive in force when available."""
    arrays = [t.positions for t in trajs if len(t)]
    if scenario is not None:
        arrays.extend(np.asarray(b, dtype=float) for b in scenario.corridor_bounds)
    if not arrays:
        arrays = [np.zeros((1, 2))]
    c = Canvas(*_limits(arrays))
    if scenario is not None:
        _scenario_layer(c, scenario)
    for i, tr in enumerate(trajs):
        pts = tr.positions
        labels = tr.meta.get("primitive")
        if not labels:
            c.polyline(pts, PALETTE[i % len(PALETTE)], 0.8, 0.7)
            continue
        # split into runs of the same primitive kind
        kinds = [lab.split("[")[0] for lab in labels]
        start = 0
        for j in range(1, len(kinds) + 1):
            if j == len(kinds) or kinds[j] != kinds[start]:
                seg = pts[start:min(j + 1, len(pts))]
                if len(seg) > 1:
                    c.polyline(seg, PRIMITIVE_COLORS.get(kinds[start], "#7f7f7f"), 0.8, 0.7)
                start = j
    return c.render()


def stats_svg(stats, every: int = 10, trajs=None) -> str:
    """Mean path with one-standard-deviation ellipses every ``every`` samples."""
    arrays = [stats.mean_points]
    if trajs:
        arrays.extend(t.positions for t in trajs)
    c = Canvas(*_limits(arrays, pad=1.0))
    for tr in trajs or ():
        c.polyline(tr.positions, "#bbbbbb", 0.5, 0.6)
    lengths = stats.ellipse_lengths
    for i in range(0, len(stats), max(1, every)):
        ax = stats.axes[i, :, 0]
        c.ellipse(stats.mean_points[i, 0], stats.mean_points[i, 1], lengths[i, 0], lengths[i, 1],
                  math.atan2(ax[1], ax[0]), "#1f77b4")
    c.polyline(stats.mean_points, "#d62728", 1.5)
    return c.render()


def series_svg(t, series: dict, width=800, height=300) -> str:
    """Line plot of named series against ``t`` (angle series and similar)."""
    t = np.asarray(t, dtype=float)
    ys = [np.asarray(v, dtype=float) for v in series.values()]
    lo = min(float(y.min()) for y in ys) if ys and len(t) else 0.0
    hi = max(float(y.max()) for y in ys) if ys and len(t) else 1.0
    t0, t1 = (float(t[0]), float(t[-1])) if len(t) else (0.0, 1.0)
    c = Canvas((t0, t1 if t1 > t0 else t0 + 1), (lo, hi if hi > lo else lo + 1), width=width)
    # stretch y so the plot is not as flat as a shared aspect ratio would make it
    span = (hi - lo) if hi > lo else 1.0
    c.height = height
    ysc = (height - 2 * c.margin) / span

    def px(x, y):
        return c.margin + (x - c.x0) * c.scale, c.margin + (hi - y) * ysc

    c.px = px
    for i, (name, y) in enumerate(series.items()):
        c.polyline(np.column_stack([t, y]), PALETTE[i % len(PALETTE)], 1.2)
        c.items.append(f'<text x="{_n(width - 150)}" y="{_n(15 + 14 * i)}" font-size="11" '
                       f'fill="{PALETTE[i % len(PALETTE)]}" font-family="sans-serif">{name}</text>')
    return c.render()
