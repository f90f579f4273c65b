"""Poisson emergence process: sampling, sliding-window rate, KS fit and
interval probabilities."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidInputError, TooFewArrivalsError
from .rng import stream

MIN_ARRIVALS = 5
_KS_SERIES_TOL = 1e-10


@dataclass(frozen=True)
class EmergenceSequence:
    times: np.ndarray
    window: tuple[float, float]

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", t)
        lo, hi = self.window
        if hi < lo:
            raise InvalidInputError("observation window end precedes start")
        if len(t):
            if np.any(np.diff(t) < 0):
                raise InvalidInputError("emergence times must be non-decreasing")
            if t[0] < lo or t[-1] > hi:
                raise InvalidInputError("emergence times fall outside the window")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def duration(self) -> float:
        return self.window[1] - self.window[0]


def sample_poisson(rate: float, window: tuple[float, float], seed: int | np.random.Generator) -> EmergenceSequence:
    """Homogeneous Poisson arrivals on ``window`` via exponential gaps."""
    if not rate > 0:
        raise InvalidInputError("rate must be positive")
    lo, hi = float(window[0]), float(window[1])
    rng = seed if isinstance(seed, np.random.Generator) else stream(seed, "arrivals")
    span = hi - lo
    out = []
    t = lo
    chunk = max(16, int(rate * span * 1.2) + 16)
    while True:
        gaps = rng.exponential(1.0 / rate, size=chunk)
        ts = t + np.cumsum(gaps)
        keep = ts[ts <= hi]
        out.append(keep)
        if len(keep) < chunk:
            break
        t = ts[-1]
    times = np.concatenate(out) if out else np.empty(0)
    return EmergenceSequence(times, (lo, hi))


def sliding_rate(seq: EmergenceSequence, t: float, T: float) -> float:
    """Arrivals in ``[t, t + T)`` divided by ``T``."""
    if not T > 0:
        raise InvalidInputError("T must be positive")
    times = seq.times
    n = np.searchsorted(times, t + T, side="left") - np.searchsorted(times, t, side="left")
    return n / T


def rate_curve(seq: EmergenceSequence, T: float = 120.0, step: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Sliding rate for every window start that keeps ``[t, t+T]`` inside the
    observation window."""
    lo, hi = seq.window
    if hi - lo < T:
        return np.empty(0), np.empty(0)
    starts = lo + step * np.arange(int(math.floor((hi - T - lo) / step + 1e-9)) + 1)
    return starts, np.array([sliding_rate(seq, s, T) for s in starts])


def kolmogorov_sf(x: float) -> float:
    """Survival function of the Kolmogorov distribution,
    ``2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2)``."""
    if x <= 0:
        return 1.0
    if x < 0.2:
        # series converges too slowly there and the answer is 1 to double precision
        return 1.0
    total = 0.0
    sign = 1.0
    j = 1
    while True:
        term = math.exp(-2.0 * j * j * x * x)
        total += sign * term
        if term < _KS_SERIES_TOL:
            break
        sign = -sign
        j += 1
    return max(0.0, min(1.0, 2.0 * total))


@dataclass(frozen=True)
class KSResult:
    statistic: float
    p_value: float
    passed: bool
    n: int


def ks_statistic_uniform(u: np.ndarray) -> float:
    """One-sample KS distance of ``u`` (values in [0, 1]) from Uniform(0, 1)."""
    u = np.sort(np.asarray(u, dtype=float))
    n = len(u)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - u)
    d_minus = np.max(u - (i - 1) / n)
    return float(max(d_plus, d_minus))


def ks_test_poisson(seq: EmergenceSequence, alpha: float = 0.05) -> KSResult:
    """Test a homogeneous Poisson model through conditional uniformity.

    Given N arrivals in the window they should be i.i.d. uniform, so the
    rescaled times are compared to U(0, 1). The p-value uses the asymptotic
    Kolmogorov law with Stephens' small-sample correction
    ``(sqrt(n) + 0.12 + 0.11/sqrt(n)) D``.
    """
    n = len(seq)
    if n < MIN_ARRIVALS:
        raise TooFewArrivalsError(f"{n} arrivals; at least {MIN_ARRIVALS} needed")
    lo, hi = seq.window
    if not hi > lo:
        raise InvalidInputError("observation window has zero length")
    u = (seq.times - lo) / (hi - lo)
    d = ks_statistic_uniform(u)
    sn = math.sqrt(n)
    p = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)
    return KSResult(d, p, p > alpha, n)


def interval_probabilities(rate: float, interval: float = 1.0) -> tuple[float, float, float]:
    """P(0), P(1) and P(>=2) arrivals in an interval of ``interval`` seconds."""
    if not rate > 0:
        raise InvalidInputError("rate must be positive")
    m = rate * interval
    p0 = math.exp(-m)
    p1 = m * p0
    return p0, p1, 1.0 - p0 - p1


def read_times_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return np.empty(0)
    body = rows[1:]
    return np.sort(np.array([float(r[0]) for r in body if r and r[0].strip()], dtype=float))


def write_times_csv(path, times) -> None:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"])
        for t in times:
            w.writerow([repr(float(t))])
