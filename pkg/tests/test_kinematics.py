import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from loomnav.errors import DegenerateStateError, InvalidInputError
from loomnav.kinematics import (DEFAULT_DT, DEFAULT_SPEED, Trajectory, VehicleState, integrate, renormalize,
                                step)

from conftest import state

finite = st.floats(-50, 50, allow_nan=False)
curv = st.floats(-5, 5, allow_nan=False)
headings = st.floats(-math.pi, math.pi, allow_nan=False)
speeds = st.floats(0.1, 20, allow_nan=False)
dts = st.floats(1e-4, 0.5, allow_nan=False)


def test_defaults_match_camera_and_bat_speed():
    assert DEFAULT_DT == pytest.approx(1 / 131.5)
    assert DEFAULT_SPEED == 10.17


def test_straight_step():
    s = step(state(0, 0, 0), 0.0, 1.0)
    np.testing.assert_allclose(s.position, [1, 0], atol=1e-15)
    np.testing.assert_allclose(s.tangent, [1, 0], atol=1e-15)


def test_quarter_circle():
    s = step(state(0, 0, 0), math.pi / 2, 1.0)
    np.testing.assert_allclose(s.position, [2 / math.pi, 2 / math.pi], atol=1e-12)
    np.testing.assert_allclose(s.tangent, [0, 1], atol=1e-12)
    np.testing.assert_allclose(s.normal, [-1, 0], atol=1e-12)


def test_arc_matches_closed_form_for_any_curvature():
    u, v, dt = 0.7, 3.0, 0.4
    s = step(state(0, 0, 0, v), u, dt)
    th = v * u * dt
    np.testing.assert_allclose(s.position, [math.sin(th) / u, (1 - math.cos(th)) / u], atol=1e-14)


def test_tiny_curvature_uses_series_without_jump():
    a = step(state(0, 0, 0), 1e-13, 1.0)
    b = step(state(0, 0, 0), 1e-11, 1.0)
    np.testing.assert_allclose(a.position, [1, 5e-14], atol=1e-15)
    np.testing.assert_allclose(b.position, [1, 5e-12], atol=1e-15)


def test_long_run_frame_drift():
    s = state(1.0, -2.0, 0.3)
    for _ in range(10_000):
        s = step(s, 0.3, 0.01)
    assert s.frame_error() < 1e-9


@pytest.mark.parametrize("bad", [math.nan, math.inf])
def test_non_finite_inputs_rejected(bad):
    with pytest.raises(InvalidInputError):
        step(state(0, 0, 0), bad, 0.1)
    with pytest.raises(InvalidInputError):
        step(state(0, 0, 0), 0.1, bad)


def test_non_positive_dt_rejected():
    with pytest.raises(InvalidInputError):
        step(state(0, 0, 0), 0.1, 0.0)


def test_curvature_clamp():
    a = step(state(0, 0, 0), 10.0, 0.1, max_curvature=0.5)
    b = step(state(0, 0, 0), 0.5, 0.1)
    np.testing.assert_array_equal(a.position, b.position)


@given(finite, finite, headings, speeds, curv, dts, dts)
def test_composition_of_arcs(x, y, h, v, u, a, b):
    s = state(x, y, h, v)
    one = step(s, u, a + b)
    two = step(step(s, u, a), u, b)
    np.testing.assert_allclose(one.position, two.position, atol=1e-11 * max(1.0, abs(x), abs(y)))
    np.testing.assert_allclose(one.tangent, two.tangent, atol=1e-12)


@given(finite, finite, headings, speeds, curv, dts)
def test_arc_length_and_turn_angle(x, y, h, v, u, dt):
    s = state(x, y, h, v)
    n = step(s, u, dt)
    turn = math.atan2(n.tangent[1], n.tangent[0]) - math.atan2(s.tangent[1], s.tangent[0])
    turn = (turn + math.pi) % (2 * math.pi) - math.pi
    th = v * u * dt
    assert turn == pytest.approx((th + math.pi) % (2 * math.pi) - math.pi, abs=1e-12)
    # chord of an arc of length v dt and angle th
    chord = np.hypot(*(n.position - s.position))
    expected = v * dt if abs(th) < 1e-12 else 2 * abs(math.sin(th / 2)) / abs(u)
    assert chord == pytest.approx(expected, abs=1e-12 * max(1.0, abs(x) + abs(y)))
    assert n.speed == s.speed
    assert n.frame_error() < 1e-12


def test_renormalize_examples():
    s = renormalize(state(0, 0, 0))
    np.testing.assert_array_equal(s.tangent, [1, 0])
    s = renormalize(VehicleState(np.zeros(2), np.array([2.0, 0.0]), np.array([0.0, 2.0])))
    np.testing.assert_array_equal(s.tangent, [1, 0])
    np.testing.assert_array_equal(s.normal, [0, 1])
    s = renormalize(VehicleState(np.zeros(2), np.array([0.6, 0.8]), np.array([0.0, 0.0])))
    np.testing.assert_allclose(s.tangent, [0.6, 0.8], atol=1e-15)
    np.testing.assert_allclose(s.normal, [-0.8, 0.6], atol=1e-15)


def test_renormalize_zero_tangent():
    with pytest.raises(DegenerateStateError):
        renormalize(VehicleState(np.zeros(2), np.zeros(2), np.zeros(2)))


def test_frame_is_right_handed():
    s = VehicleState.make((0, 0), (3, 4))
    assert s.tangent[0] * s.normal[1] - s.tangent[1] * s.normal[0] == pytest.approx(1.0)
    assert s.is_valid()


def test_trajectory_rejects_unordered_times():
    s = state(0, 0, 0)
    with pytest.raises(InvalidInputError):
        Trajectory(0, [0.0, 0.0], [s, s])


def test_trajectory_emergence_defaults_to_first_sample():
    tr = integrate(state(0, 0, 0), [0.1] * 5, 0.1, t0=2.0)
    assert tr.emergence_time == 2.0
    np.testing.assert_allclose(tr.times, 2.0 + 0.1 * np.arange(6))
    tr.check()


def test_from_positions_estimates_headings():
    t = np.linspace(0, 1, 11)
    tr = Trajectory.from_positions("a", t, np.column_stack([3 * t, 4 * t]))
    np.testing.assert_allclose(tr.tangents, np.tile([0.6, 0.8], (11, 1)), atol=1e-12)
    assert tr.states[0].speed == pytest.approx(5.0)
