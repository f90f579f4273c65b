import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import stats

from loomnav.analysis.correlation import pearson, windowed_count_vs_y
from loomnav.errors import DegenerateVarianceError, InvalidInputError
from loomnav.kinematics import Trajectory

samples = st.lists(st.floats(-100, 100), min_size=3, max_size=40)


def test_pearson_examples():
    x = np.arange(10.0)
    assert pearson(x, 2 * x + 1) == pytest.approx(1.0)
    assert pearson(x, -x) == pytest.approx(-1.0)
    assert pearson([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)


def test_pearson_preconditions():
    with pytest.raises(InvalidInputError):
        pearson([1, 2], [1, 2])
    with pytest.raises(InvalidInputError):
        pearson([1, 2, 3], [1, 2])
    with pytest.raises(DegenerateVarianceError):
        pearson([1, 1, 1], [1, 2, 3])


@given(st.data())
def test_pearson_matches_scipy_and_is_affine_invariant(data):
    x = np.array(data.draw(samples))
    y = np.array(data.draw(st.lists(st.floats(-100, 100), min_size=len(x), max_size=len(x))))
    assume(np.ptp(x) > 1e-3 and np.ptp(y) > 1e-3)
    r = pearson(x, y)
    assert r == pytest.approx(stats.pearsonr(x, y).statistic, abs=1e-9)
    assert -1 <= r <= 1
    a = data.draw(st.floats(0.1, 10))
    b = data.draw(st.floats(-10, 10))
    assert pearson(a * x + b, y) == pytest.approx(r, abs=1e-12 * max(1.0, np.abs(x).max()))


def _track(aid, t0, y, n=10):
    t = t0 + 0.01 * np.arange(n)
    return Trajectory.from_positions(aid, t, np.column_stack([np.arange(n) * 0.1, np.full(n, y)]))


def test_single_window():
    trajs = [_track(i, 5.0 + i, float(i)) for i in range(5)]
    assert windowed_count_vs_y(trajs, 40) == [(5, 2.0)]


def test_time_shift_invariance():
    first = [_track(i, 1.0 + i, float(i % 3)) for i in range(6)]
    second = [_track(10 + i, 41.0 + i, float(i % 3)) for i in range(6)]
    out = windowed_count_vs_y(first + second, 40)
    assert len(out) == 2
    assert out[0] == out[1]


def test_empty_windows_skipped():
    out = windowed_count_vs_y([_track(0, 0.0, 1.0), _track(1, 130.0, 2.0)], 40)
    assert out == [(1, 1.0), (1, 2.0)]


def test_pooled_option_weights_by_samples():
    a = _track(0, 0.0, 0.0, n=10)
    b = _track(1, 1.0, 3.0, n=30)
    assert windowed_count_vs_y([a, b])[0][1] == pytest.approx(1.5)
    assert windowed_count_vs_y([a, b], pooled=True)[0][1] == pytest.approx(90 / 40)


def test_followers_displaced_give_positive_correlation(rng):
    # windows with more emergences hold more followers, which fly 1 m higher
    trajs, aid = [], 0
    for w in range(12):
        n = int(rng.integers(2, 12))
        for j in range(n):
            follower = j > 0 and rng.random() < 0.8
            trajs.append(_track(aid, 40.0 * w + rng.uniform(0, 39), rng.normal(0, 0.2) + (1.0 if follower else 0.0)))
            aid += 1
    pairs = windowed_count_vs_y(trajs, 40)
    counts, ys = zip(*pairs)
    assert pearson(counts, ys) > 0.3
