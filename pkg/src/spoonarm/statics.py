"""Gravity torques, balancing-spring models, and spring synthesis.

The parallelogram transmission decouples the two lifted joints: each
gravity torque depends only on its own absolute angle,

    tau_g2 = -g * cos(theta2) * L1 * (c1*m1 + m2 + m_p)
    tau_g3 = -g * cos(theta3) * L2 * (c2*m2 + m_p)

so each joint can be balanced independently by one spring anchored at the
base. Three spring models are supported:

- linear zero-free-length: the classical idealization. With the base
  anchor a directly above the joint and the attachment at radius b on the
  bar, the stored energy is 0.5*k*l^2 with l^2 = a^2 + b^2 - 2ab sin(theta),
  giving torque +k*a*b*cos(theta), which cancels the gravity cosine exactly
  when k*a*b matches the gravity coefficient.
- linear real: the same geometry with a nonzero free length l0; the
  cancellation is then only approximate and the stiffness is fitted
  numerically.
- torsion: plain rotational spring about the joint, the scheme this
  design moved away from; a line can't follow a cosine, which is exactly
  what the synthesis comparison quantifies.

Sign convention: all torques returned here are the torques the element
exerts on the joint (negative potential gradient).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InfeasibleBoundsError
from .kinematics import JointState, Joint, MechanismParams, handle_jacobian

GRID_SAMPLES = 181          # minimax grid over a joint range
GOLDEN_REL_TOL = 1e-10      # relative bracket convergence for stiffness fits
DEFAULT_ANCHOR_BOUNDS = ((0.06, 0.14), (0.03, 0.07))
DEFAULT_FREE_LENGTH = 0.005


class SpringKind(Enum):
    LINEAR_ZERO_FREE_LENGTH = "linear_zero_free_length"
    LINEAR_REAL = "linear_real"
    TORSION = "torsion"


@dataclass(frozen=True)
class SpringSpec:
    """One balancing spring acting on J2 or J3.

    stiffness is N/m for the linear kinds and N*m/rad for torsion.
    anchor_radius is the base anchor's distance above the joint axis,
    bar_radius the attachment radius on the rotating bar; both apply to
    the linear kinds only. free_length applies to the real linear kind,
    torsion_neutral to the torsion kind.
    """

    kind: SpringKind
    joint: Joint
    stiffness: float
    anchor_radius: float = 0.0
    bar_radius: float = 0.0
    free_length: float = 0.0
    torsion_neutral: float = 0.0

    def __post_init__(self):
        if self.joint not in (Joint.J2, Joint.J3):
            raise ValueError("springs act on J2 or J3 only")
        if self.stiffness < 0.0:
            raise ValueError("stiffness must be >= 0")
        if self.free_length < 0.0:
            raise ValueError("free_length must be >= 0")
        if self.kind is SpringKind.TORSION:
            # torsion springs have no geometry fields; keeping them zeroed
            # lets the config format store each kind losslessly
            if (self.anchor_radius != 0.0 or self.bar_radius != 0.0
                    or self.free_length != 0.0):
                raise ValueError(
                    "torsion springs take no anchor/bar/free-length geometry")
        else:
            if not (self.anchor_radius > 0.0 and self.bar_radius > 0.0):
                raise ValueError(
                    "linear springs need anchor_radius > 0 and bar_radius > 0")
            if self.torsion_neutral != 0.0:
                raise ValueError(
                    "torsion_neutral applies to torsion springs only")
            if (self.kind is SpringKind.LINEAR_ZERO_FREE_LENGTH
                    and self.free_length != 0.0):
                raise ValueError(
                    "zero-free-length springs must have free_length == 0")


@dataclass(eq=False)
class TorqueProfile:
    """Torque sampled over one joint's angle range."""

    joint: Joint
    angles: np.ndarray
    torques: np.ndarray

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=float)
        self.torques = np.asarray(self.torques, dtype=float)
        if self.angles.shape != self.torques.shape:
            raise ValueError("angles and torques must have the same length")
        if np.any(np.diff(self.angles) <= 0.0):
            raise ValueError("angles must be strictly increasing")

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.torques)))


@dataclass(frozen=True)
class BalanceResult:
    """Synthesis output: one spring per lifted joint plus residual reports."""

    spring_j2: SpringSpec
    spring_j3: SpringSpec
    residual_j2: TorqueProfile
    residual_j3: TorqueProfile

    @property
    def springs(self) -> tuple:
        return (self.spring_j2, self.spring_j3)

    @property
    def max_residual(self) -> float:
        return max(self.residual_j2.max_abs, self.residual_j3.max_abs)


# ---------------------------------------------------------------------------
# gravity


def gravity_coefficients(params: MechanismParams) -> tuple[float, float]:
    """(A2, A3) such that tau_gi = -g * Ai * cos(theta_i)."""
    a2 = params.link1_length * (params.com_fraction1 * params.mass_link1
                                + params.mass_link2 + params.mass_payload)
    a3 = params.link2_length * (params.com_fraction2 * params.mass_link2
                                + params.mass_payload)
    return a2, a3


def gravity_torque(params: MechanismParams,
                   state: JointState) -> tuple[float, float]:
    """Gravity torques (tau_g2, tau_g3) at the two lifted joints."""
    a2, a3 = gravity_coefficients(params)
    g = params.gravity
    return (-g * a2 * math.cos(state.q[1]), -g * a3 * math.cos(state.q[2]))


def gravity_potential(params: MechanismParams, state: JointState) -> float:
    """Total gravitational potential of the three lumped masses."""
    _, th2, th3 = state.q
    h0 = params.base_height
    L1, L2 = params.link1_length, params.link2_length
    z1 = h0 + params.com_fraction1 * L1 * math.sin(th2)
    z2 = h0 + L1 * math.sin(th2) + params.com_fraction2 * L2 * math.sin(th3)
    z3 = h0 + L1 * math.sin(th2) + L2 * math.sin(th3)
    return params.gravity * (params.mass_link1 * z1
                             + params.mass_link2 * z2
                             + params.mass_payload * z3)


# ---------------------------------------------------------------------------
# spring models


def _spring_length(spec: SpringSpec, angle: float) -> float:
    a, b = spec.anchor_radius, spec.bar_radius
    return math.sqrt(max(a * a + b * b - 2.0 * a * b * math.sin(angle), 0.0))


def spring_torque(spec: SpringSpec, angle: float) -> float:
    """Torque the spring exerts on its joint at the given bar angle."""
    k = spec.stiffness
    if spec.kind is SpringKind.TORSION:
        return -k * (angle - spec.torsion_neutral)
    ab = spec.anchor_radius * spec.bar_radius
    if spec.kind is SpringKind.LINEAR_ZERO_FREE_LENGTH:
        return k * ab * math.cos(angle)
    # real linear spring: tau = -k (l - l0) dl/dtheta, dl/dtheta = -ab cos/l
    l = _spring_length(spec, angle)
    if l < 1e-12:
        # anchor and attachment coincide (a == b, bar vertical); the force
        # direction is undefined there, the torque limit is zero
        return 0.0
    return k * (l - spec.free_length) * ab * math.cos(angle) / l


def spring_potential(spec: SpringSpec, angle: float) -> float:
    """Elastic energy stored in the spring at the given bar angle."""
    k = spec.stiffness
    if spec.kind is SpringKind.TORSION:
        d = angle - spec.torsion_neutral
        return 0.5 * k * d * d
    l = _spring_length(spec, angle)
    if spec.kind is SpringKind.LINEAR_ZERO_FREE_LENGTH:
        return 0.5 * k * l * l
    stretch = l - spec.free_length
    return 0.5 * k * stretch * stretch


def spring_joint_torques(springs, state: JointState) -> tuple[float, float, float]:
    """Summed spring torque per joint as a (0, tau2, tau3) triple."""
    taus = [0.0, 0.0, 0.0]
    for spec in springs:
        taus[spec.joint] += spring_torque(spec, state.q[spec.joint])
    return tuple(taus)


# ---------------------------------------------------------------------------
# synthesis


def _golden_min(f, lo: float, hi: float) -> float:
    """Golden-section argmin of a unimodal f on [lo, hi]."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = f(c), f(d)
    while (hi - lo) > GOLDEN_REL_TOL * max(1.0, abs(hi)):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def _synthesize_joint(joint: Joint, gravity_coeff: float, angle_range,
                      kind: SpringKind, anchors, free_length: float):
    lo, hi = angle_range
    if not hi > lo:
        raise InfeasibleBoundsError(f"joint range for {joint.key} is degenerate")
    a, b = anchors
    grid = np.linspace(lo, hi, GRID_SAMPLES)
    tau_g = -gravity_coeff * np.cos(grid)

    if kind is SpringKind.LINEAR_ZERO_FREE_LENGTH:
        k = gravity_coeff / (a * b)
        spec = SpringSpec(kind, joint, k, a, b)
    elif kind is SpringKind.LINEAR_REAL:
        if free_length == 0.0:
            # degenerates to the zero-free-length geometry, whose exact
            # optimum is the closed form; skip the search
            k = gravity_coeff / (a * b)
        else:
            l = np.sqrt(a * a + b * b - 2.0 * a * b * np.sin(grid))
            safe_l = np.where(l > 1e-12, l, 1.0)
            shape = np.where(l > 1e-12,
                             (l - free_length) * a * b * np.cos(grid) / safe_l,
                             0.0)
            k = _golden_min(
                lambda kk: float(np.max(np.abs(tau_g + kk * shape))),
                0.0, 4.0 * gravity_coeff / (a * b) + 1.0)
        spec = SpringSpec(kind, joint, k, a, b, free_length=free_length)
    elif kind is SpringKind.TORSION:
        # for fixed k the best neutral angle centers the residual band,
        # leaving half the band width as the minimax residual
        def band(kk):
            h = gravity_coeff * np.cos(grid) + kk * grid
            return 0.5 * float(h.max() - h.min())

        k = _golden_min(band, 0.0, 4.0 * gravity_coeff + 1.0)
        h = gravity_coeff * np.cos(grid) + k * grid
        center = 0.5 * float(h.max() + h.min())
        neutral = center / k if k > 0.0 else 0.5 * (lo + hi)
        spec = SpringSpec(kind, joint, k, torsion_neutral=neutral)
    else:
        raise ValueError(f"unknown spring kind {kind!r}")

    residual = tau_g + np.array([spring_torque(spec, t) for t in grid])
    return spec, TorqueProfile(joint, grid, residual)


def synthesize_balancing(params: MechanismParams, kind: SpringKind,
                         anchor_bounds=DEFAULT_ANCHOR_BOUNDS,
                         free_length: float = DEFAULT_FREE_LENGTH,
                         ) -> BalanceResult:
    """Fit one spring of the given kind per lifted joint.

    anchor_bounds is ((a_min, a_max), (b_min, b_max)); anchors are fixed at
    the bound midpoints and only the stiffness is searched (the torque law
    depends on the anchors through the product k*a*b, so freeing them adds
    nothing). Zero-free-length springs have the closed-form exact solution
    k*a*b = g*A_joint; the real and torsion kinds minimize the worst
    absolute residual over a 181-point grid of the joint range by
    golden-section search (the objective is unimodal in k).

    Raises InfeasibleBoundsError for an empty or nonpositive anchor box or
    a degenerate joint range.
    """
    (a_lo, a_hi), (b_lo, b_hi) = anchor_bounds
    if a_lo > a_hi or b_lo > b_hi:
        raise InfeasibleBoundsError("anchor bounds describe an empty box")
    a = 0.5 * (a_lo + a_hi)
    b = 0.5 * (b_lo + b_hi)
    if not (a > 0.0 and b > 0.0):
        raise InfeasibleBoundsError("anchor bounds must give positive radii")
    if free_length < 0.0:
        raise InfeasibleBoundsError("free_length must be >= 0")

    a2, a3 = gravity_coefficients(params)
    g = params.gravity
    spec2, prof2 = _synthesize_joint(Joint.J2, g * a2,
                                     params.joint_limits[Joint.J2],
                                     kind, (a, b), free_length)
    spec3, prof3 = _synthesize_joint(Joint.J3, g * a3,
                                     params.joint_limits[Joint.J3],
                                     kind, (a, b), free_length)
    return BalanceResult(spec2, spec3, prof2, prof3)


def residual_torque_profile(params: MechanismParams, springs,
                            ) -> tuple[TorqueProfile, TorqueProfile]:
    """Gravity plus summed spring torque over each lifted joint's range."""
    a2, a3 = gravity_coefficients(params)
    profiles = []
    for joint, coeff in ((Joint.J2, a2), (Joint.J3, a3)):
        lo, hi = params.joint_limits[joint]
        if hi > lo:
            grid = np.linspace(lo, hi, GRID_SAMPLES)
        else:
            grid = np.array([lo])
        tau = -params.gravity * coeff * np.cos(grid)
        for spec in springs:
            if spec.joint is joint:
                tau = tau + np.array([spring_torque(spec, t) for t in grid])
        profiles.append(TorqueProfile(joint, grid, tau))
    return tuple(profiles)


def holding_force(params: MechanismParams, springs,
                  state: JointState) -> np.ndarray:
    """Handle force that holds the mechanism still at the given pose.

    Solves J_handle^T F = -(tau_gravity + tau_spring). Uses a least-squares
    solve so a singular pose returns the minimum-norm force instead of
    blowing up.
    """
    tau_g2, tau_g3 = gravity_torque(params, state)
    tau_s = spring_joint_torques(springs, state)
    residual = np.array([tau_s[0], tau_g2 + tau_s[1], tau_g3 + tau_s[2]])
    jt = handle_jacobian(params, state).T
    force, *_ = np.linalg.lstsq(jt, -residual, rcond=None)
    return force
