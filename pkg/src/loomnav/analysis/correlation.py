"""Correlation measures used on trajectory ensembles."""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from ..errors import DegenerateVarianceError, InvalidInputError


def pearson(xs, ys) -> float:
    """Pearson correlation coefficient."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InvalidInputError("pearson needs two 1-D sequences of equal length")
    if len(x) < 3:
        raise InvalidInputError("pearson needs at least 3 points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVarianceError("a sequence has zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def windowed_count_vs_y(trajs, window: float = 40.0, pooled: bool = False,
                        start: float | None = None) -> list[tuple[int, float]]:
    """(number emerging, mean y) for consecutive emergence-time windows.

    By default the mean y of a window averages each trajectory's own mean
    y; ``pooled=True`` averages all samples of those trajectories instead.
    Windows are anchored at ``start`` (default: earliest emergence) and empty
    windows are skipped.
    """
    trajs = list(trajs)
    if not trajs:
        return []
    if not window > 0:
        raise InvalidInputError("window must be positive")
    em = np.array([t.emergence_time for t in trajs], dtype=float)
    t0 = em.min() if start is None else start
    groups = defaultdict(list)
    for tr, e in zip(trajs, em):
        groups[int(math.floor((e - t0) / window))].append(tr)
    out = []
    for k in sorted(groups):
        members = groups[k]
        if pooled:
            y = np.concatenate([m.positions[:, 1] for m in members]).mean()
        else:
            y = np.mean([m.positions[:, 1].mean() for m in members])
        out.append((len(members), float(y)))
    return out
