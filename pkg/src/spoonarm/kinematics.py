"""Geometry of the 3-DoF arm: a vertical-axis base joint carrying a planar
two-link chain whose links are doubled as parallelograms.

Conventions used throughout the package:

- The table frame has z up and its origin on the J1 axis at table level.
- J1 rotates the whole arm about the vertical axis by phi1 (yaw).
- theta2 and theta3 are measured from the horizontal, positive upward.
  Because the links are parallelogram pairs, both angles are absolute
  (each is driven relative to the base, not relative to the previous
  link), and heights read as plain sums of sines.
- The parallelograms keep every carried frame at constant pitch and roll,
  so the spoon and the handle translate without tilting; their yaw tracks
  phi1. That constraint is encoded by construction: poses are built with
  pitch = roll = 0 rather than integrated.

Two handle arrangements are modeled. The original one fixes the handle at
the outer end of the second link, so the handle travels exactly as far as
the utensil. The revised one attaches the handle bracket inside the second
parallelogram at radius d_h < L2 from the mid joint, which scales the
handle's vertical travel by roughly d_h/L2 while the utensil still moves
the full distance. The bracket itself is an L-shaped piece described by a
signed vertical drop and a signed lateral offset toward the user; the
lateral offset mirrors with handedness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

from .errors import LimitViolationError, UnreachableError

TWO_PI = 2.0 * math.pi


class Joint(IntEnum):
    """Joint identifiers; the int value indexes q and joint_limits."""

    J1 = 0
    J2 = 1
    J3 = 2

    @property
    def key(self) -> str:
        return self.name.lower()

# The handle can be clamped at five discrete spin angles about its own axis.
# Spinning the handle has no effect on any position, only on the handle
# frame's yaw, so these are plain yaw offsets.
HANDLE_ANGLE_OFFSETS_RAD = tuple(
    math.radians(d) for d in (-30.0, -15.0, 0.0, 15.0, 30.0)
)


class HandleVariant(Enum):
    OLD_TIP = "old_tip"
    NEW_INBOARD = "new_inboard"


class Handedness(Enum):
    RIGHT = "right"
    LEFT = "left"


@dataclass(frozen=True)
class MechanismParams:
    """Full geometric and inertial description of one arm build.

    Lengths in m, masses in kg, angles in rad. Joint limits are (min, max)
    pairs for (phi1, theta2, theta3); a degenerate pair (min == max) pins
    the joint, which is occasionally useful for workspace slices.
    """

    base_height: float = 0.10       # height of J2 above the table
    base_offset: float = 0.05       # horizontal offset of J2 from the J1 axis
    link1_length: float = 0.25
    link2_length: float = 0.25
    spoon_offset: float = 0.08      # utensil tip beyond the L2 end, radial
    handle_variant: HandleVariant = HandleVariant.NEW_INBOARD
    handle_distance: float = 0.16   # bracket radius from J3, 0 < d_h <= L2
    bracket_drop: float = -0.04     # signed vertical handle offset
    bracket_lateral: float = 0.06   # signed lateral offset, mirrored by handedness
    handedness: Handedness = Handedness.RIGHT
    handle_angle_index: int = 2     # one of the five discrete handle spins
    joint_limits: tuple = (
        (-math.pi, math.pi),
        (-0.35, 2.0),
        (-1.75, 1.4),
    )
    mass_link1: float = 0.35        # link 1 plus its parallelogram share
    mass_link2: float = 0.30        # link 2 plus carried bars, lumped
    mass_payload: float = 0.10      # spoon + compliant attachment
    com_fraction1: float = 0.5      # COM position along link 1, in (0, 1]
    com_fraction2: float = 0.5
    gravity: float = 9.81

    def __post_init__(self):
        for name in ("base_height", "base_offset", "link1_length",
                     "link2_length", "spoon_offset"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be > 0")
        if self.handle_variant is HandleVariant.OLD_TIP:
            # the old design rides the outer end of link 2, always
            object.__setattr__(self, "handle_distance", self.link2_length)
        if not 0.0 < self.handle_distance <= self.link2_length:
            raise ValueError("handle_distance must satisfy 0 < d_h <= L2")
        for name in ("com_fraction1", "com_fraction2"):
            if not 0.0 < getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1]")
        for name in ("mass_link1", "mass_link2", "mass_payload"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")
        if self.handle_angle_index not in range(5):
            raise ValueError("handle_angle_index must be one of 0..4")
        limits = tuple((float(lo), float(hi)) for lo, hi in self.joint_limits)
        if len(limits) != 3:
            raise ValueError("joint_limits needs one (min, max) pair per joint")
        for lo, hi in limits:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise ValueError("joint limits must be finite with min <= max")
        object.__setattr__(self, "joint_limits", limits)

    @property
    def max_radial_reach(self) -> float:
        return (self.base_offset + self.link1_length + self.link2_length
                + self.spoon_offset)

    def within_limits(self, q) -> bool:
        return all(lo <= qi <= hi
                   for qi, (lo, hi) in zip(q, self.joint_limits))


@dataclass(frozen=True)
class JointState:
    """Generalized coordinates (phi1, theta2, theta3) and their rates."""

    q: tuple = (0.0, 0.0, 0.0)
    qdot: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        q = tuple(float(v) for v in self.q)
        qdot = tuple(float(v) for v in self.qdot)
        if len(q) != 3 or len(qdot) != 3:
            raise ValueError("JointState needs exactly three coordinates")
        if not all(math.isfinite(v) for v in q + qdot):
            raise ValueError("JointState entries must be finite")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qdot", qdot)


@dataclass(frozen=True)
class Pose:
    """Cartesian position plus the carried frame's orientation.

    pitch and roll are identically 0 for every pose this mechanism can
    produce; they are kept as explicit fields so downstream reports do not
    need to know that.
    """

    x: float
    y: float
    z: float
    pitch: float = 0.0
    roll: float = 0.0
    yaw: float = 0.0

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def radial(self) -> float:
        return math.hypot(self.x, self.y)


def _lateral_sign(params: MechanismParams) -> float:
    # right-handed builds offset the handle to +y at phi1 = 0, left-handed
    # builds are the mirror image
    return 1.0 if params.handedness is Handedness.RIGHT else -1.0


def spoon_pose(params: MechanismParams, state: JointState) -> Pose:
    """Pose of the utensil tip."""
    phi1, th2, th3 = state.q
    r = (params.base_offset
         + params.link1_length * math.cos(th2)
         + params.link2_length * math.cos(th3)
         + params.spoon_offset)
    z = (params.base_height
         + params.link1_length * math.sin(th2)
         + params.link2_length * math.sin(th3))
    return Pose(x=r * math.cos(phi1), y=r * math.sin(phi1), z=z, yaw=phi1)


def handle_pose(params: MechanismParams, state: JointState) -> Pose:
    """Pose of the handle grip point for the configured variant.

    The bracket radius d_h replaces L2 in the radial chain (for the old
    variant d_h == L2, so the handle rides the utensil point), then the
    constant-orientation bracket offsets are added: bracket_drop on height
    and bracket_lateral perpendicular to the arm plane, mirrored for
    left-handed builds. The discrete handle spin shows up in yaw only.
    """
    phi1, th2, th3 = state.q
    r = (params.base_offset
         + params.link1_length * math.cos(th2)
         + params.handle_distance * math.cos(th3))
    z = (params.base_height
         + params.link1_length * math.sin(th2)
         + params.handle_distance * math.sin(th3)
         + params.bracket_drop)
    b = _lateral_sign(params) * params.bracket_lateral
    c1, s1 = math.cos(phi1), math.sin(phi1)
    yaw = phi1 + HANDLE_ANGLE_OFFSETS_RAD[params.handle_angle_index]
    return Pose(x=r * c1 - b * s1, y=r * s1 + b * c1, z=z, yaw=yaw)


def forward_kinematics(params: MechanismParams,
                       state: JointState) -> tuple[Pose, Pose]:
    """Spoon and handle poses for one joint state."""
    return spoon_pose(params, state), handle_pose(params, state)


def jacobian(params: MechanismParams, state: JointState) -> np.ndarray:
    """3x3 analytic Jacobian of the spoon position wrt (phi1, theta2, theta3)."""
    phi1, th2, th3 = state.q
    L1, L2 = params.link1_length, params.link2_length
    c1, s1 = math.cos(phi1), math.sin(phi1)
    r = (params.base_offset + L1 * math.cos(th2) + L2 * math.cos(th3)
         + params.spoon_offset)
    return np.array([
        [-r * s1, -L1 * math.sin(th2) * c1, -L2 * math.sin(th3) * c1],
        [r * c1, -L1 * math.sin(th2) * s1, -L2 * math.sin(th3) * s1],
        [0.0, L1 * math.cos(th2), L2 * math.cos(th3)],
    ])


def handle_jacobian(params: MechanismParams, state: JointState) -> np.ndarray:
    """3x3 analytic Jacobian of the handle position; maps handle forces to
    joint torques through its transpose."""
    phi1, th2, th3 = state.q
    L1, dh = params.link1_length, params.handle_distance
    c1, s1 = math.cos(phi1), math.sin(phi1)
    r = params.base_offset + L1 * math.cos(th2) + dh * math.cos(th3)
    b = _lateral_sign(params) * params.bracket_lateral
    return np.array([
        [-r * s1 - b * c1, -L1 * math.sin(th2) * c1, -dh * math.sin(th3) * c1],
        [r * c1 - b * s1, -L1 * math.sin(th2) * s1, -dh * math.sin(th3) * s1],
        [0.0, L1 * math.cos(th2), dh * math.cos(th3)],
    ])


def _wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(a + math.pi, TWO_PI)
    if a <= 0.0:
        a += TWO_PI
    return a - math.pi


def inverse_kinematics(params: MechanismParams, target) -> JointState:
    """Joint angles that place the utensil tip at `target` (x, y, z).

    The base yaw comes straight from atan2 on the target's horizontal
    direction; the remaining planar two-link closure has the usual two
    branches. The elbow-up branch (mid joint above the chord from J2 to
    the target, equivalently theta2 >= theta3) is preferred; the other
    branch is used only when joint limits exclude the preferred one.

    Raises UnreachableError outside the annulus, LimitViolationError when
    the target is reachable but both branches violate joint limits.
    """
    x, y, z = (float(v) for v in target)
    L1, L2 = params.link1_length, params.link2_length

    radial = math.hypot(x, y)
    phi1 = math.atan2(y, x) if radial > 0.0 else 0.0

    u = radial - params.base_offset - params.spoon_offset
    w = z - params.base_height
    d = math.hypot(u, w)

    if d > L1 + L2 + 1e-12 or d < abs(L1 - L2) - 1e-12:
        raise UnreachableError(
            f"target at planar distance {d:.6f} m is outside the reachable "
            f"annulus [{abs(L1 - L2):.6f}, {L1 + L2:.6f}]")
    if d < 1e-12:
        # fold-back singularity (only possible when L1 == L2): every theta2
        # works; pick the straight-down fold
        candidates = [(0.0, math.pi)]
    else:
        cos_gamma = (d * d + L1 * L1 - L2 * L2) / (2.0 * L1 * d)
        gamma = math.acos(min(1.0, max(-1.0, cos_gamma)))
        psi = math.atan2(w, u)
        candidates = []
        for th2 in (psi + gamma, psi - gamma):  # elbow-up first
            th3 = math.atan2(w - L1 * math.sin(th2), u - L1 * math.cos(th2))
            candidates.append((_wrap_angle(th2), _wrap_angle(th3)))

    for th2, th3 in candidates:
        if params.within_limits((phi1, th2, th3)):
            return JointState(q=(phi1, th2, th3))
    raise LimitViolationError(
        "target reachable only outside the joint limits")
