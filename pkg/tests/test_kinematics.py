import math

import numpy as np
import pytest

from spoonarm.errors import LimitViolationError, UnreachableError
from spoonarm.kinematics import (
    HANDLE_ANGLE_OFFSETS_RAD,
    Handedness,
    HandleVariant,
    JointState,
    MechanismParams,
    forward_kinematics,
    handle_jacobian,
    handle_pose,
    inverse_kinematics,
    jacobian,
    spoon_pose,
)

# Planar closure solutions for the plate (r=0.35, z=0.02) and mouth
# (r=0.35, z=0.35) targets with the nominal geometry, frozen from an
# independent bisection solve of the two-link closure equations.
PLATE_Q = (0.0, 0.734786300573640, -1.432328307741455)
MOUTH_Q = (0.0, 1.691059933476078, 0.007223018384193)

WIDE_LIMITS = ((-math.pi, math.pi), (-math.pi, math.pi), (-math.pi, math.pi))


def random_states(params, n, seed, margin=0.0):
    rng = np.random.default_rng(seed)
    states = []
    for _ in range(n):
        q = tuple(
            lo + margin + (hi - lo - 2 * margin) * rng.uniform()
            for lo, hi in params.joint_limits
        )
        states.append(JointState(q=q, qdot=tuple(rng.uniform(-1, 1, 3))))
    return states


def fd_jacobian(fk, params, state, h=1e-6):
    cols = []
    for i in range(3):
        qp = list(state.q)
        qm = list(state.q)
        qp[i] += h
        qm[i] -= h
        pp = fk(params, JointState(q=tuple(qp))).position
        pm = fk(params, JointState(q=tuple(qm))).position
        cols.append((pp - pm) / (2 * h))
    return np.column_stack(cols)


# ---------------------------------------------------------------------------
# forward kinematics


def test_fk_all_links_horizontal():
    p = MechanismParams()
    spoon, handle = forward_kinematics(p, JointState())
    full = p.base_offset + p.link1_length + p.link2_length + p.spoon_offset
    assert spoon.x == pytest.approx(full, abs=1e-15)
    assert spoon.y == 0.0
    assert spoon.z == pytest.approx(p.base_height, abs=1e-15)
    assert spoon.pitch == 0.0 and spoon.roll == 0.0
    assert handle.z == pytest.approx(p.base_height + p.bracket_drop, abs=1e-15)


def test_fk_pure_base_yaw():
    p = MechanismParams()
    spoon, _ = forward_kinematics(p, JointState(q=(math.pi / 2, 0.0, 0.0)))
    full = p.base_offset + p.link1_length + p.link2_length + p.spoon_offset
    assert spoon.x == pytest.approx(0.0, abs=1e-15)
    assert spoon.y == pytest.approx(full, abs=1e-15)
    assert spoon.z == pytest.approx(p.base_height, abs=1e-15)


def test_fk_plate_to_mouth_rise():
    p = MechanismParams()
    z_plate = spoon_pose(p, JointState(q=PLATE_Q)).z
    z_mouth = spoon_pose(p, JointState(q=MOUTH_Q)).z
    assert z_mouth - z_plate == pytest.approx(0.33, abs=1e-12)


def test_orientation_preserved_everywhere():
    p = MechanismParams(joint_limits=WIDE_LIMITS)
    for s in random_states(p, 10_000, seed=7):
        spoon, handle = forward_kinematics(p, s)
        assert spoon.pitch == 0.0 and spoon.roll == 0.0
        assert handle.pitch == 0.0 and handle.roll == 0.0
        assert spoon.yaw == s.q[0]


def test_yaw_equivariance():
    p = MechanismParams(joint_limits=WIDE_LIMITS)
    delta = 0.83
    rot = np.array([
        [math.cos(delta), -math.sin(delta), 0.0],
        [math.sin(delta), math.cos(delta), 0.0],
        [0.0, 0.0, 1.0],
    ])
    for s in random_states(p, 200, seed=11):
        phi1, th2, th3 = s.q
        rotated = JointState(q=(phi1 + delta, th2, th3))
        for fk in (spoon_pose, handle_pose):
            np.testing.assert_allclose(
                fk(p, rotated).position, rot @ fk(p, s).position, atol=1e-12)


# ---------------------------------------------------------------------------
# handle mapping


def test_old_tip_handle_rides_spoon_height():
    p = MechanismParams(handle_variant=HandleVariant.OLD_TIP,
                        bracket_drop=0.0, bracket_lateral=0.0,
                        joint_limits=WIDE_LIMITS)
    # without bracket offsets the handle height tracks the spoon height
    # exactly, the spoon offset shows up in radius only
    for s in random_states(p, 100, seed=3):
        spoon, handle = forward_kinematics(p, s)
        c1, s1 = math.cos(s.q[0]), math.sin(s.q[0])
        r_spoon = spoon.x * c1 + spoon.y * s1    # signed radial projection
        r_handle = handle.x * c1 + handle.y * s1
        assert handle.z == pytest.approx(spoon.z, abs=1e-12)
        assert r_spoon - r_handle == pytest.approx(p.spoon_offset, abs=1e-12)


def test_inboard_height_scales_with_attachment_radius():
    p = MechanismParams(handle_distance=0.12)
    th3_a, th3_b = -0.4, 0.9
    state = lambda th3: JointState(q=(0.0, 0.5, th3))
    d_sin = math.sin(th3_b) - math.sin(th3_a)
    dz_handle = handle_pose(p, state(th3_b)).z - handle_pose(p, state(th3_a)).z
    dz_spoon = spoon_pose(p, state(th3_b)).z - spoon_pose(p, state(th3_a)).z
    assert dz_handle == pytest.approx(0.12 * d_sin, abs=1e-12)
    assert dz_spoon == pytest.approx(p.link2_length * d_sin, abs=1e-12)


def test_handedness_mirrors_lateral_offset_only():
    right = MechanismParams(handedness=Handedness.RIGHT)
    left = MechanismParams(handedness=Handedness.LEFT)
    s = JointState(q=(0.0, 0.4, -0.2))
    hr = handle_pose(right, s)
    hl = handle_pose(left, s)
    assert hr.y == pytest.approx(-hl.y, abs=1e-15)
    assert hr.x == hl.x and hr.z == hl.z


def test_handle_angle_index_spins_yaw_only():
    s = JointState(q=(0.3, 0.5, -0.1))
    base = handle_pose(MechanismParams(handle_angle_index=2), s)
    for idx, offset in enumerate(HANDLE_ANGLE_OFFSETS_RAD):
        h = handle_pose(MechanismParams(handle_angle_index=idx), s)
        assert h.yaw == pytest.approx(0.3 + offset, abs=1e-15)
        assert (h.x, h.y, h.z) == (base.x, base.y, base.z)


# ---------------------------------------------------------------------------
# parameter validation


def test_old_tip_forces_handle_distance():
    p = MechanismParams(handle_variant=HandleVariant.OLD_TIP,
                        handle_distance=0.07)
    assert p.handle_distance == p.link2_length


@pytest.mark.parametrize("kwargs", [
    {"handle_distance": 0.3},         # > L2
    {"handle_distance": 0.0},
    {"link1_length": -0.1},
    {"spoon_offset": 0.0},
    {"com_fraction1": 0.0},
    {"com_fraction2": 1.2},
    {"mass_link2": -0.01},
    {"handle_angle_index": 5},
    {"joint_limits": ((0.0, 1.0), (2.0, 1.0), (0.0, 1.0))},
])
def test_invalid_params_rejected(kwargs):
    with pytest.raises(ValueError):
        MechanismParams(**kwargs)


def test_joint_state_validation():
    with pytest.raises(ValueError):
        JointState(q=(0.0, float("nan"), 0.0))
    with pytest.raises(ValueError):
        JointState(q=(0.0, 0.0))


# ---------------------------------------------------------------------------
# inverse kinematics


def test_ik_plate_point_matches_frozen_solution():
    s = inverse_kinematics(MechanismParams(), (0.35, 0.0, 0.02))
    np.testing.assert_allclose(s.q, PLATE_Q, atol=1e-12)


def test_ik_mouth_point_matches_frozen_solution():
    s = inverse_kinematics(MechanismParams(), (0.35, 0.0, 0.35))
    np.testing.assert_allclose(s.q, MOUTH_Q, atol=1e-12)


def test_ik_round_trip_sweep():
    p = MechanismParams()
    worst = 0.0
    for s in random_states(p, 500, seed=19, margin=1e-6):
        target = spoon_pose(p, s).position
        again = spoon_pose(p, inverse_kinematics(p, target)).position
        worst = max(worst, float(np.linalg.norm(again - target)))
    assert worst < 1e-9


def test_ik_prefers_elbow_up():
    s = inverse_kinematics(MechanismParams(), (0.35, 0.0, 0.02))
    assert s.q[1] >= s.q[2]


def test_ik_beyond_reach():
    p = MechanismParams()
    with pytest.raises(UnreachableError):
        inverse_kinematics(p, (p.max_radial_reach + 0.01, 0.0, p.base_height))


def test_ik_inside_inner_annulus():
    p = MechanismParams(link2_length=0.15, handle_distance=0.1)
    # planar distance 0 from the shoulder, but |L1 - L2| = 0.10
    with pytest.raises(UnreachableError):
        inverse_kinematics(p, (p.base_offset + p.spoon_offset, 0.0,
                               p.base_height))


def test_ik_falls_back_to_other_branch():
    # limits that exclude the elbow-up solution for the plate point but
    # admit the elbow-down one
    p = MechanismParams(joint_limits=((-math.pi, math.pi),
                                      (-math.pi, 0.5),
                                      (-math.pi, math.pi)))
    s = inverse_kinematics(p, (0.35, 0.0, 0.02))
    assert s.q[1] < s.q[2]
    pos = spoon_pose(p, s).position
    np.testing.assert_allclose(pos, [0.35, 0.0, 0.02], atol=1e-9)


def test_ik_limit_violation_when_both_branches_excluded():
    p = MechanismParams(joint_limits=((-math.pi, math.pi),
                                      (-0.1, 0.1),
                                      (-math.pi, math.pi)))
    with pytest.raises(LimitViolationError):
        inverse_kinematics(p, (0.35, 0.0, 0.02))


def test_ik_respects_base_yaw_limits():
    p = MechanismParams(joint_limits=((-0.5, 0.5), (-0.35, 2.0), (-1.75, 1.4)))
    with pytest.raises(LimitViolationError):
        inverse_kinematics(p, (-0.35, 0.0, 0.02))


# ---------------------------------------------------------------------------
# Jacobians


def test_jacobian_matches_finite_differences():
    p = MechanismParams(joint_limits=WIDE_LIMITS)
    worst = 0.0
    for s in random_states(p, 300, seed=23):
        J = jacobian(p, s)
        J_fd = fd_jacobian(spoon_pose, p, s)
        err = np.abs(J - J_fd) / np.maximum(1.0, np.abs(J))
        worst = max(worst, float(err.max()))
    assert worst < 1e-6


def test_handle_jacobian_matches_finite_differences():
    p = MechanismParams(joint_limits=WIDE_LIMITS, bracket_lateral=0.09)
    worst = 0.0
    for s in random_states(p, 300, seed=29):
        J = handle_jacobian(p, s)
        J_fd = fd_jacobian(handle_pose, p, s)
        err = np.abs(J - J_fd) / np.maximum(1.0, np.abs(J))
        worst = max(worst, float(err.max()))
    assert worst < 1e-6


def test_jacobian_vertical_links_height_stationary():
    J = jacobian(MechanismParams(joint_limits=WIDE_LIMITS),
                 JointState(q=(0.0, math.pi / 2, math.pi / 2)))
    assert abs(J[2, 1]) < 1e-12
    assert abs(J[2, 2]) < 1e-12


def test_jacobian_yaw_column_is_radial_at_zero_yaw():
    p = MechanismParams()
    s = JointState(q=(0.0, 0.6, -0.3))
    assert jacobian(p, s)[1, 0] == pytest.approx(
        spoon_pose(p, s).radial, abs=1e-12)
