import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from loomnav.errors import BehindImagePlaneError, LeaderNotInFrontError
from loomnav.kinematics import VehicleState, step
from loomnav.perception import image_coordinate, relative_geometry, time_to_transit, virtual_loom

from conftest import state


def test_relative_geometry_axis_aligned():
    g = relative_geometry(state(3, 4, 0), state(0, 0, 0))
    np.testing.assert_array_equal(g.r, [3, 4])
    assert (g.r_x, g.r_y) == (3, 4)


def test_relative_geometry_coincident():
    g = relative_geometry(state(1, 1, 0.4), state(1, 1, 0.0))
    assert g.r_x == 0 and g.r_y == 0


def test_relative_geometry_rotated_frame():
    g = relative_geometry(state(3, 4, 0), state(0, 0, math.pi / 2))
    assert g.r_x == pytest.approx(4)
    assert g.r_y == pytest.approx(-3)


def test_alignment_and_alpha():
    g = relative_geometry(state(1, 0, math.pi / 3), state(0, 0, 0))
    assert g.alignment == pytest.approx(0.5)
    assert g.alpha == pytest.approx(math.pi / 3)


def test_loom_parallel_is_zero():
    assert virtual_loom(state(5, 2, 0.0), state(0, 0, 0.0)) == 0.0
    # unit vectors dotted with themselves round to within an ulp of one
    assert virtual_loom(state(5, 2, 0.3), state(0, 0, 0.3)) == pytest.approx(0.0, abs=1e-15)


def test_loom_perpendicular():
    assert virtual_loom(state(2, 0, math.pi / 2), state(0, 0, 0)) == pytest.approx(0.5, abs=1e-15)


def test_loom_antiparallel():
    assert virtual_loom(state(1, 0, math.pi), state(0, 0, 0)) == pytest.approx(2.0, abs=1e-15)


@pytest.mark.parametrize("x", [0.0, -1.0, 5e-7])
def test_loom_requires_leader_in_front(x):
    with pytest.raises(LeaderNotInFrontError):
        virtual_loom(state(x, 3, 0), state(0, 0, 0))


def test_image_coordinate_examples():
    assert image_coordinate(0.0, 2.0) == 0.0
    assert image_coordinate(2.0, 1.01, 0.01) == pytest.approx(0.02)
    with pytest.raises(BehindImagePlaneError):
        image_coordinate(1.0, 0.005, 0.01)


# subnormal r_x underflows to d = 0
@given(st.floats(-10, 10, allow_subnormal=False), st.floats(0.02, 10))
def test_image_coordinate_sign(r_x, r_y):
    d = image_coordinate(r_x, r_y)
    assert np.sign(d) == np.sign(r_x)


def test_time_to_transit_examples():
    assert time_to_transit(0.02, 0.01) == pytest.approx(2.0)
    assert time_to_transit(0.02, 0.0) == math.inf
    assert time_to_transit(0.0, 0.01) == 0.0


pose = st.tuples(st.floats(-20, 20), st.floats(-20, 20), st.floats(-math.pi, math.pi))


@given(pose, pose, st.floats(-math.pi, math.pi), st.floats(-30, 30), st.floats(-30, 30))
def test_rigid_motion_invariance(lp, fp, rot, tx, ty):
    lead, fol = state(*lp, speed=3.0), state(*fp, speed=2.0)
    c, s = math.cos(rot), math.sin(rot)
    Q = np.array([[c, -s], [s, c]])

    def move(v):
        return VehicleState.make(Q @ v.position + (tx, ty), Q @ v.tangent, v.speed)

    g0 = relative_geometry(lead, fol)
    g1 = relative_geometry(move(lead), move(fol))
    assert g1.r_x == pytest.approx(g0.r_x, abs=1e-12 * (1 + abs(tx) + abs(ty) + 40))
    assert g1.r_y == pytest.approx(g0.r_y, abs=1e-12 * (1 + abs(tx) + abs(ty) + 40))
    if g0.r_x > 1e-3:
        assert virtual_loom(move(lead), move(fol)) == pytest.approx(virtual_loom(lead, fol), rel=1e-9, abs=1e-12)


@given(pose, pose)
def test_loom_reciprocity_and_sign(lp, fp):
    lead, fol = state(*lp, speed=1.0), state(*fp, speed=4.0)
    g = relative_geometry(lead, fol)
    if g.r_x <= 1e-6:
        return
    lam = virtual_loom(lead, fol)
    assert lam == max(0.0, 1.0 - float(fol.tangent @ lead.tangent)) * fol.speed / g.r_x
    assert lam >= 0


def test_transit_countdown_for_stationary_point():
    # a fixed point ahead of a straight flier: r_x / v falls by one second per second
    v = 10.17
    fol = state(0, 0, 0, v)
    target = np.array([30.0, 2.0])
    dt = 0.01
    prev = float((target - fol.position) @ fol.tangent) / v
    for _ in range(100):
        fol = step(fol, 0.0, dt)
        now = float((target - fol.position) @ fol.tangent) / v
        assert prev - now == pytest.approx(dt, abs=1e-12)
        prev = now
