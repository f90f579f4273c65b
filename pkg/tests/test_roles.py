import numpy as np

from loomnav.analysis.roles import RoleClass, classify_roles, groups, leader_relation, role_counts
from loomnav.kinematics import Trajectory
from loomnav.strategy import PairingParams

DT = 1 / 131.5


def _straight(aid, t0, y, duration=1.5, v=10.0, x_at_t0=0.0):
    t = t0 + DT * np.arange(int(duration / DT))
    x = x_at_t0 + v * (t - t0)
    return Trajectory.from_positions(aid, t, np.column_stack([x, np.full(len(t), y)]))


def test_lone_track():
    roles = classify_roles([_straight("a", 0.0, 0.0)])
    assert roles == {"a": RoleClass.C1}


def test_chain():
    trajs = [_straight("A", 0.0, 0.0), _straight("B", 0.3, 0.5), _straight("C", 0.6, -0.5)]
    roles = classify_roles(trajs, PairingParams())
    assert roles == {"A": RoleClass.C2, "B": RoleClass.C3, "C": RoleClass.C4}
    assert role_counts(roles) == {"C1": 0, "C2": 1, "C3": 1, "C4": 1}
    assert groups(roles) == {"G1": ["A"], "G2": ["B", "C"]}


def test_far_apart_pair_is_two_singles():
    trajs = [_straight("A", 0.0, 0.0), _straight("B", 0.2, 11.0)]
    assert set(classify_roles(trajs).values()) == {RoleClass.C1}


def test_separation_threshold_is_respected():
    # A is 2 m ahead and 9 m across: 9.2 m apart
    trajs = [_straight("A", 0.0, 0.0), _straight("B", 0.2, 9.0)]
    assert classify_roles(trajs)["B"] is RoleClass.C4


def test_short_overlap_does_not_pair():
    # B appears just before A leaves: fewer than 20 shared frames
    a = _straight("A", 0.0, 0.0, duration=0.5)
    b = _straight("B", 0.5 - 10 * DT, 0.0, duration=1.0, x_at_t0=-3.0)
    assert leader_relation([a, b]) == {"A": set(), "B": set()}


def test_later_agent_never_leads():
    # B emerges later but flies ahead of A
    a = _straight("A", 0.0, 0.0)
    b = _straight("B", 0.1, 0.0, x_at_t0=5.0)
    assert leader_relation([a, b]) == {"A": set(), "B": set()}


def test_group_membership():
    assert RoleClass.C1.group == "G1" and RoleClass.C2.group == "G1"
    assert RoleClass.C3.group == "G2" and RoleClass.C4.group == "G2"


def test_follower_effect_groups_and_range():
    from loomnav.analysis.roles import follow_phase_x_range, follower_effect

    a = _straight("A", 0.0, 0.0)
    b = _straight("B", 0.3, 0.5)
    c = _straight("C", 5.0, -1.0)
    for tr, lab in ((a, "Circle[pole]"), (b, "Follow[A]"), (c, "Circle[pole]")):
        tr.meta["primitive"] = [lab] * len(tr)
    lo, hi = follow_phase_x_range([a, b, c])
    assert 0.0 <= lo < hi <= 15.0
    fe = follower_effect([a, b, c], x_range=(1.0, 10.0))
    assert fe.g2_mean_y == 0.5
    assert fe.g1_mean_y == -0.5
    assert fe.difference == 1.0
    assert (fe.g1_count, fe.g2_count) == (2, 1)
