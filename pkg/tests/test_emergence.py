import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special, stats

from loomnav.emergence import (EmergenceSequence, interval_probabilities, kolmogorov_sf, ks_statistic_uniform,
                               ks_test_poisson, rate_curve, read_times_csv, sample_poisson, sliding_rate,
                               write_times_csv)
from loomnav.errors import InvalidInputError, TooFewArrivalsError
from loomnav.rng import stream


def test_interval_probabilities_reported_values():
    p = interval_probabilities(0.961)
    np.testing.assert_allclose(p, (0.3825, 0.3676, 0.2499), atol=1e-4)


def test_interval_probabilities_limits():
    p0, p1, p2 = interval_probabilities(1e-9)
    assert p0 == pytest.approx(1.0) and p1 == pytest.approx(0.0, abs=1e-8) and p2 == pytest.approx(0.0, abs=1e-8)
    p0, p1, _ = interval_probabilities(math.log(2))
    assert p0 == pytest.approx(0.5)
    assert p1 == pytest.approx(0.5 * math.log(2))
    with pytest.raises(InvalidInputError):
        interval_probabilities(0.0)


@given(st.floats(1e-3, 50))
def test_interval_probabilities_sum_to_one(rate):
    p = interval_probabilities(rate)
    assert sum(p) == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(p[:2], stats.poisson.pmf([0, 1], rate), rtol=1e-12)


def test_sampling_is_deterministic():
    a = sample_poisson(0.961, (0, 200), 5)
    b = sample_poisson(0.961, (0, 200), 5)
    np.testing.assert_array_equal(a.times, b.times)
    assert not np.array_equal(a.times, sample_poisson(0.961, (0, 200), 6).times)


def test_zero_length_window_is_empty():
    assert len(sample_poisson(0.961, (10, 10), 0)) == 0


def test_mean_count_matches_rate_times_duration():
    counts = np.array([len(sample_poisson(0.961, (0, 200), stream(3, "mc", i))) for i in range(10_000)])
    assert counts.mean() == pytest.approx(192.2, abs=3)
    # 3-sigma band on the mean of 10^4 Poisson counts
    assert abs(counts.mean() - 192.2) < 3 * math.sqrt(192.2 / 10_000)
    assert counts.var() == pytest.approx(192.2, rel=0.05)


def test_gaps_are_exponential():
    seq = sample_poisson(2.0, (0, 5000), 11)
    gaps = np.diff(seq.times)
    assert stats.kstest(gaps, stats.expon(scale=0.5).cdf).pvalue > 1e-3


def test_sequence_validation():
    with pytest.raises(InvalidInputError):
        EmergenceSequence(np.array([2.0, 1.0]), (0, 3))
    with pytest.raises(InvalidInputError):
        EmergenceSequence(np.array([4.0]), (0, 3))
    with pytest.raises(InvalidInputError):
        sample_poisson(0.0, (0, 1), 0)


def test_sliding_rate_examples():
    seq = EmergenceSequence(np.arange(12) * 10.0 + 5.0, (0, 300))
    assert sliding_rate(seq, 0.0, 120.0) == pytest.approx(0.1)
    assert sliding_rate(seq, 200.0, 50.0) == 0.0
    with pytest.raises(InvalidInputError):
        sliding_rate(seq, 0.0, 0.0)


def test_sliding_rate_is_half_open():
    seq = EmergenceSequence(np.array([0.0, 1.0, 2.0]), (0, 3))
    assert sliding_rate(seq, 0.0, 1.0) == 1.0
    assert sliding_rate(seq, 1.0, 1.0) == 1.0


@given(st.integers(0, 2**32), st.floats(1.0, 50.0))
def test_disjoint_windows_reproduce_total_rate(seed, T):
    seq = sample_poisson(0.961, (0, 200), seed)
    n = int(math.ceil(200 / T))
    total = sum(sliding_rate(seq, i * T, T) * T for i in range(n))
    assert total == pytest.approx(len(seq), abs=1e-9)


def test_rate_curve_band():
    inside = []
    for i in range(50):
        seq = sample_poisson(0.961, (0, 600), stream(9, "band", i))
        _, r = rate_curve(seq, 120.0, 1.0)
        inside.append(np.mean((r >= 0.7) & (r <= 1.2)))
    assert np.mean(inside) >= 0.95


def test_rate_curve_too_short_window():
    t, r = rate_curve(EmergenceSequence(np.array([1.0]), (0, 50)), 120.0)
    assert len(t) == 0 and len(r) == 0


def test_kolmogorov_sf_matches_scipy():
    for x in np.linspace(0.2, 3.0, 57):
        assert kolmogorov_sf(x) == pytest.approx(special.kolmogorov(x), abs=1e-9)
    assert kolmogorov_sf(0.1) == 1.0
    assert kolmogorov_sf(0.0) == 1.0


@given(st.lists(st.floats(0, 1), min_size=1, max_size=60))
def test_ks_statistic_matches_scipy(u):
    d = ks_statistic_uniform(np.array(u))
    assert d == pytest.approx(stats.kstest(u, "uniform").statistic, abs=1e-12)
    assert 0.0 <= d <= 1.0


@given(st.integers(0, 2**20), st.floats(-100, 100), st.floats(0.1, 10))
def test_ks_statistic_affine_invariance(seed, shift, scale):
    seq = sample_poisson(0.961, (0, 200), seed)
    if len(seq) < 5:
        return
    moved = EmergenceSequence(shift + scale * seq.times, (shift, shift + scale * 200))
    assert ks_test_poisson(moved).statistic == pytest.approx(ks_test_poisson(seq).statistic, abs=1e-12)


def test_uniform_grid_passes():
    n = 50
    seq = EmergenceSequence(200 * np.arange(1, n + 1) / (n + 1), (0, 200))
    res = ks_test_poisson(seq)
    assert res.passed
    assert res.statistic == pytest.approx(1 / (n + 1))


def test_clustered_sequence_fails():
    seq = EmergenceSequence(np.linspace(0, 2, 40), (0, 200))
    res = ks_test_poisson(seq)
    assert not res.passed
    assert res.statistic > 0.98


def test_too_few_arrivals():
    with pytest.raises(TooFewArrivalsError):
        ks_test_poisson(EmergenceSequence(np.array([1.0, 2.0, 3.0]), (0, 10)))


def test_times_csv_round_trip(tmp_path):
    t = np.array([0.5, 1.25, 7.0])
    write_times_csv(tmp_path / "t.csv", t)
    assert (tmp_path / "t.csv").read_text().splitlines()[0] == "t"
    np.testing.assert_array_equal(read_times_csv(tmp_path / "t.csv"), t)
