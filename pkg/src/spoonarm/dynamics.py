"""Damped rigid-body dynamics of the arm plus the compliant utensil mount.

Model
-----
Generalized coordinates q = (phi1, theta2, theta3). The three lumped
masses sit at c1*L1 along link 1, c2*L2 along link 2, and at the outer
end of link 2 (payload: spoon plus mount); the parallelogram coupler bars
are folded into m1/m2 half-and-half, which preserves total mass and COM
while keeping a three-coordinate Lagrangian. Because theta2 and theta3
are absolute angles, the planar block of the mass matrix has constant
diagonal entries and a single cos(theta2 - theta3) coupling term; the yaw
entry is the instantaneous moment of inertia about the vertical axis.
Coriolis/centrifugal terms come from the Christoffel symbols of the
analytic M(q), which guarantees the skew-symmetry that makes the energy
bookkeeping testable.

The compliant mount is modeled as two independent driven torsional
oscillators (pitch and yaw deflection of the spoon relative to its
carrier): I_s * dd'' = -k_r * dd - c_r * dd' + tau_contact. Contact is an
impulse: it arrives as a velocity jump of Lambda / I_s. The oscillators
do not couple back into the arm (the payload mass already rides the arm;
the deflection inertia is small), which keeps the safety analysis clean.

Integration is classical fixed-step RK4 on the full state
(q, q', deflections, deflection rates, dissipated energy). Joint limits
clamp the position and zero the outgoing velocity after each step.
Everything is deterministic: identical inputs (including noise seeds)
give bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import DeflectionExceededError, NonFiniteStateError
from .kinematics import (
    Handedness,
    Joint,
    JointState,
    MechanismParams,
    handle_jacobian,
    handle_pose,
    inverse_kinematics,
    spoon_pose,
)
from .statics import gravity_potential, spring_potential, spring_torque

DEFAULT_TIMESTEP = 1e-3
NOISE_COMPONENTS = 64


class DamperModel(Enum):
    NONE = "none"
    VISCOUS = "viscous"
    DEAD_ZONE_VISCOUS = "dead_zone_viscous"


@dataclass(frozen=True)
class DamperSpec:
    """One rotary damper on one joint.

    The dead-zone model produces no torque below the velocity threshold
    and a shifted viscous torque above it (continuous at the threshold),
    mimicking dampers that leave small movements completely undamped.
    """

    joint: Joint
    model: DamperModel = DamperModel.VISCOUS
    coefficient: float = 0.0     # N*m*s/rad
    deadzone: float = 0.0        # rad/s, dead-zone model only

    def __post_init__(self):
        if self.coefficient < 0.0:
            raise ValueError("damper coefficient must be >= 0")
        if self.deadzone < 0.0:
            raise ValueError("damper deadzone must be >= 0")
        # fields that the model cannot use must stay zero, so every spec
        # round-trips losslessly through the per-model config schema
        if self.model is not DamperModel.DEAD_ZONE_VISCOUS and self.deadzone:
            raise ValueError("deadzone applies to the dead-zone model only")
        if self.model is DamperModel.NONE and self.coefficient:
            raise ValueError("a disabled damper cannot carry a coefficient")


class ComplianceMode(Enum):
    RIGID = "rigid"
    COMPLIANT = "compliant"


@dataclass(frozen=True)
class ComplianceSpec:
    """Rubber-mounted utensil attachment, or a rigid one for comparison."""

    mode: ComplianceMode = ComplianceMode.COMPLIANT
    stiffness: float = 2.0          # N*m/rad per axis
    damping: float = 0.012          # N*m*s/rad per axis
    deflection_limit: float = 0.6   # rad, model validity bound
    recenter_tolerance: float = 0.01  # rad
    inertia: float = 5e-4           # kg*m^2, spoon about the mount

    def __post_init__(self):
        if not self.deflection_limit > 0.0:
            raise ValueError("deflection_limit must be > 0")
        if not self.recenter_tolerance > 0.0:
            raise ValueError("recenter_tolerance must be > 0")
        if self.mode is ComplianceMode.COMPLIANT:
            if not (self.stiffness > 0.0 and self.damping > 0.0
                    and self.inertia > 0.0):
                raise ValueError(
                    "compliant mode needs stiffness, damping, inertia > 0")

    @property
    def damping_ratio(self) -> float:
        if self.mode is ComplianceMode.RIGID:
            return math.inf
        return self.damping / (2.0 * math.sqrt(self.stiffness * self.inertia))


def _unit(direction):
    d = tuple(float(v) for v in direction)
    if len(d) != 3:
        raise ValueError("direction needs three components")
    n = math.sqrt(d[0] ** 2 + d[1] ** 2 + d[2] ** 2)
    if not n > 0.0:
        raise ValueError("direction must be nonzero")
    if abs(n - 1.0) < 1e-12:
        # already unit; dividing again would wobble the last bit and
        # break exact save/load round trips
        return d
    return (d[0] / n, d[1] / n, d[2] / n)


@dataclass(frozen=True)
class FreeRelease:
    """No handle input; the arm moves under its own forces."""


@dataclass(frozen=True)
class SineTremor:
    """Single-tone handle force A*sin(2*pi*f*t) along a fixed direction."""

    amplitude: float            # N
    frequency: float            # Hz
    direction: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.amplitude < 0.0 or not self.frequency > 0.0:
            raise ValueError("need amplitude >= 0 and frequency > 0")
        object.__setattr__(self, "direction", _unit(self.direction))


@dataclass(frozen=True)
class NoiseTremor:
    """Band-limited pseudo-random handle force.

    Sum of 64 equal-amplitude sinusoids at uniformly spaced frequencies in
    [f_lo, f_hi] with seeded uniform phases, scaled so the long-run RMS of
    the force magnitude equals `rms`. Deterministic in (seed, t).
    """

    rms: float                  # N
    f_lo: float                 # Hz
    f_hi: float                 # Hz
    seed: int
    direction: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.rms < 0.0:
            raise ValueError("rms must be >= 0")
        if not 0.0 < self.f_lo < self.f_hi:
            raise ValueError("need 0 < f_lo < f_hi")
        object.__setattr__(self, "direction", _unit(self.direction))


@dataclass(frozen=True)
class SpasmImpulse:
    """Rectangular force pulse: `force` N on [onset, onset + duration]."""

    force: float
    duration: float
    onset: float = 0.0
    direction: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.duration < 0.0 or self.onset < 0.0:
            raise ValueError("onset and duration must be >= 0")
        object.__setattr__(self, "direction", _unit(self.direction))


@dataclass(frozen=True)
class PrescribedTrajectory:
    """Kinematic playback: the utensil tip tracks (t, x, y, z) waypoints.

    The user is position-controlling the handle here, so the rollout is
    kinematic (IK per step with linear interpolation between waypoints)
    rather than force-driven.
    """

    waypoints: tuple    # ((t, x, y, z), ...)

    def __post_init__(self):
        wps = tuple(tuple(float(v) for v in wp) for wp in self.waypoints)
        if len(wps) < 2 or any(len(wp) != 4 for wp in wps):
            raise ValueError("need at least two (t, x, y, z) waypoints")
        times = [wp[0] for wp in wps]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("waypoint times must be strictly increasing")
        object.__setattr__(self, "waypoints", wps)


@dataclass(frozen=True)
class SpoonContact:
    """Impulse torque (N*m*s) delivered to the compliant axes at `time`."""

    time: float
    impulse_pitch: float
    impulse_yaw: float = 0.0


@dataclass(frozen=True)
class Scenario:
    duration: float
    timestep: float = DEFAULT_TIMESTEP
    initial: JointState = JointState()
    input: object = field(default_factory=FreeRelease)
    spoon_contact: SpoonContact | None = None

    def __post_init__(self):
        if not self.timestep > 0.0:
            raise ValueError("timestep must be > 0")
        if self.duration < self.timestep:
            raise ValueError("duration must be >= timestep")

    @property
    def steps(self) -> int:
        return int(math.floor(self.duration / self.timestep)) + 1


@dataclass(eq=False)
class SimResult:
    """Uniform-grid rollout record; one array row per step."""

    t: np.ndarray                # (n,)
    q: np.ndarray                # (n, 3)
    qdot: np.ndarray             # (n, 3)
    spoon_pos: np.ndarray        # (n, 3)
    handle_pos: np.ndarray       # (n, 3)
    deflection: np.ndarray       # (n, 2) pitch, yaw
    deflection_rate: np.ndarray  # (n, 2)
    applied_torque: np.ndarray   # (n, 3) handle input mapped to joints
    e_kin: np.ndarray            # (n,)
    e_pot: np.ndarray            # (n,)
    e_diss: np.ndarray           # (n,)

    def __len__(self):
        return len(self.t)

    def state(self, i: int) -> JointState:
        return JointState(q=tuple(self.q[i]), qdot=tuple(self.qdot[i]))

    @property
    def total_energy(self) -> np.ndarray:
        """Mechanical (kinetic + potential) energy per step."""
        return self.e_kin + self.e_pot


@dataclass(frozen=True)
class ContactResponse:
    """Summary of spoon_contact_response.

    `model_dependent` marks the rigid comparison value, which is an
    impulse divided by one timestep rather than a physical force level.
    """

    peak_torque: float
    settling_time: float
    recentered: bool
    model_dependent: bool = False


# ---------------------------------------------------------------------------
# mass matrix and friends


def _mass_terms(params: MechanismParams, th2: float, th3: float):
    """Scalar mass-matrix entries and their angle partials.

    Returns (M11, M22, M23, M33, D2, D3, Bs) with D2 = dM11/dtheta2,
    D3 = dM11/dtheta3 and Bs = B*sin(theta2 - theta3) = -dM23/dtheta2.
    """
    a1 = params.base_offset
    L1, L2 = params.link1_length, params.link2_length
    m1, m2, mp = params.mass_link1, params.mass_link2, params.mass_payload
    c1, c2 = params.com_fraction1, params.com_fraction2

    c2t, s2t = math.cos(th2), math.sin(th2)
    c3t, s3t = math.cos(th3), math.sin(th3)

    r1 = a1 + c1 * L1 * c2t
    r2 = a1 + L1 * c2t + c2 * L2 * c3t
    r3 = a1 + L1 * c2t + L2 * c3t

    m11 = m1 * r1 * r1 + m2 * r2 * r2 + mp * r3 * r3
    m22 = (m1 * c1 * c1 + m2 + mp) * L1 * L1
    m33 = (m2 * c2 * c2 + mp) * L2 * L2
    b = L1 * L2 * (m2 * c2 + mp)
    cos_d = c2t * c3t + s2t * s3t     # cos(th2 - th3)
    sin_d = s2t * c3t - c2t * s3t
    m23 = b * cos_d

    d2 = -2.0 * L1 * s2t * (m1 * c1 * r1 + m2 * r2 + mp * r3)
    d3 = -2.0 * L2 * s3t * (m2 * c2 * r2 + mp * r3)
    return m11, m22, m23, m33, d2, d3, b * sin_d


def mass_matrix(params: MechanismParams, state: JointState) -> np.ndarray:
    """Symmetric 3x3 generalized mass matrix M(q)."""
    m11, m22, m23, m33, *_ = _mass_terms(params, state.q[1], state.q[2])
    return np.array([
        [m11, 0.0, 0.0],
        [0.0, m22, m23],
        [0.0, m23, m33],
    ])


def coriolis_matrix(params: MechanismParams, state: JointState) -> np.ndarray:
    """Christoffel-form C(q, qdot); M' - 2C is skew-symmetric."""
    _, _, _, _, d2, d3, bs = _mass_terms(params, state.q[1], state.q[2])
    w1, w2, w3 = state.qdot
    return np.array([
        [0.5 * (d2 * w2 + d3 * w3), 0.5 * d2 * w1, 0.5 * d3 * w1],
        [-0.5 * d2 * w1, 0.0, bs * w3],
        [-0.5 * d3 * w1, -bs * w2, 0.0],
    ])


def kinetic_energy(params: MechanismParams, state: JointState) -> float:
    m11, m22, m23, m33, *_ = _mass_terms(params, state.q[1], state.q[2])
    w1, w2, w3 = state.qdot
    return 0.5 * (m11 * w1 * w1 + m22 * w2 * w2 + m33 * w3 * w3) + m23 * w2 * w3


def potential_energy(params: MechanismParams, springs,
                     state: JointState) -> float:
    """Gravitational plus spring elastic energy."""
    v = gravity_potential(params, state)
    for spec in springs:
        v += spring_potential(spec, state.q[spec.joint])
    return v


# ---------------------------------------------------------------------------
# dampers and input signals


def damper_torque(spec: DamperSpec, omega: float) -> float:
    """Torque the damper exerts at joint rate omega."""
    if spec.model is DamperModel.NONE:
        return 0.0
    if spec.model is DamperModel.VISCOUS:
        return -spec.coefficient * omega
    if abs(omega) <= spec.deadzone:
        return 0.0
    shift = math.copysign(spec.deadzone, omega)
    return -spec.coefficient * (omega - shift)


@lru_cache(maxsize=64)
def _noise_table(rms: float, f_lo: float, f_hi: float, seed: int):
    freqs = np.linspace(f_lo, f_hi, NOISE_COMPONENTS)
    phases = np.random.default_rng(seed).uniform(
        0.0, 2.0 * math.pi, NOISE_COMPONENTS)
    amplitude = rms * math.sqrt(2.0 / NOISE_COMPONENTS)
    return 2.0 * math.pi * freqs, phases, amplitude


def generate_signal(spec, t: float) -> np.ndarray:
    """Handle force vector of an input signal at time t."""
    if isinstance(spec, FreeRelease) or isinstance(spec, PrescribedTrajectory):
        return np.zeros(3)
    if isinstance(spec, SineTremor):
        mag = spec.amplitude * math.sin(2.0 * math.pi * spec.frequency * t)
    elif isinstance(spec, NoiseTremor):
        omega, phases, amplitude = _noise_table(
            spec.rms, spec.f_lo, spec.f_hi, spec.seed)
        mag = amplitude * float(np.sum(np.sin(omega * t + phases)))
    elif isinstance(spec, SpasmImpulse):
        inside = spec.onset <= t <= spec.onset + spec.duration
        mag = spec.force if inside else 0.0
    else:
        raise TypeError(f"unknown input signal {type(spec).__name__}")
    return mag * np.asarray(spec.direction)


def _force_fn(inputs):
    """Normalize the `inputs` argument to None or a callable t -> (fx,fy,fz)."""
    if inputs is None or isinstance(inputs, (FreeRelease, PrescribedTrajectory)):
        return None
    if isinstance(inputs, (SineTremor, NoiseTremor, SpasmImpulse)):
        return lambda t: generate_signal(inputs, t)
    if callable(inputs):
        return inputs
    const = tuple(float(v) for v in inputs)
    if len(const) != 3:
        raise ValueError("constant input force needs three components")
    return lambda t: const


# ---------------------------------------------------------------------------
# equations of motion


def _damper_table(dampers):
    """Per-joint list of (model, c, deadzone) triples."""
    table = ([], [], [])
    for spec in dampers:
        if spec.model is not DamperModel.NONE and spec.coefficient > 0.0:
            table[spec.joint].append(spec)
    return table


def _deriv(params, springs, damper_table, compliance, force_fn, t, y):
    """Time derivative of the packed state

    y = (phi1, th2, th3, w1, w2, w3, dp, dy, vp, vy, e_diss).
    """
    phi1, th2, th3, w1, w2, w3, dp, dy, vp, vy, _ = y

    m11, m22, m23, m33, d2, d3, bs = _mass_terms(params, th2, th3)

    # gravity (same decoupled cosine law as statics)
    g = params.gravity
    a1 = params.base_offset
    L1, L2 = params.link1_length, params.link2_length
    m1, m2, mp = params.mass_link1, params.mass_link2, params.mass_payload
    cf1, cf2 = params.com_fraction1, params.com_fraction2
    c2t, s2t = math.cos(th2), math.sin(th2)
    c3t, s3t = math.cos(th3), math.sin(th3)
    tau2 = -g * c2t * L1 * (cf1 * m1 + m2 + mp)
    tau3 = -g * c3t * L2 * (cf2 * m2 + mp)
    tau1 = 0.0

    for spec in springs:
        if spec.joint is Joint.J2:
            tau2 += spring_torque(spec, th2)
        else:
            tau3 += spring_torque(spec, th3)

    diss_power = 0.0
    rates = (w1, w2, w3)
    taus_d = [0.0, 0.0, 0.0]
    for j in range(3):
        for spec in damper_table[j]:
            td = damper_torque(spec, rates[j])
            taus_d[j] += td
            diss_power -= td * rates[j]
    tau1 += taus_d[0]
    tau2 += taus_d[1]
    tau3 += taus_d[2]

    if force_fn is not None:
        fx, fy, fz = force_fn(t)
        cp, sp = math.cos(phi1), math.sin(phi1)
        dh = params.handle_distance
        r = a1 + L1 * c2t + dh * c3t
        b_lat = (params.bracket_lateral
                 if params.handedness is Handedness.RIGHT
                 else -params.bracket_lateral)
        # J_handle^T * F, written out
        tau1 += (-r * sp - b_lat * cp) * fx + (r * cp - b_lat * sp) * fy
        tau2 += -L1 * s2t * cp * fx - L1 * s2t * sp * fy + L1 * c2t * fz
        tau3 += -dh * s3t * cp * fx - dh * s3t * sp * fy + dh * c3t * fz

    # subtract C(q, qdot) * qdot
    rhs1 = tau1 - w1 * (d2 * w2 + d3 * w3)
    rhs2 = tau2 - (-0.5 * d2 * w1 * w1 + bs * w3 * w3)
    rhs3 = tau3 - (-0.5 * d3 * w1 * w1 - bs * w2 * w2)

    # block solve; joints with no inertia (massless limit) hold their rate,
    # and a singular planar block degrades to independent per-joint solves
    tiny = 1e-18
    acc1 = rhs1 / m11 if m11 > tiny else 0.0
    det = m22 * m33 - m23 * m23
    if det > tiny:
        acc2 = (rhs2 * m33 - rhs3 * m23) / det
        acc3 = (rhs3 * m22 - rhs2 * m23) / det
    else:
        acc2 = rhs2 / m22 if m22 > tiny else 0.0
        acc3 = rhs3 / m33 if m33 > tiny else 0.0

    if compliance.mode is ComplianceMode.COMPLIANT:
        inv_i = 1.0 / compliance.inertia
        k_r, c_r = compliance.stiffness, compliance.damping
        ap = (-k_r * dp - c_r * vp) * inv_i
        ay = (-k_r * dy - c_r * vy) * inv_i
        diss_power += c_r * (vp * vp + vy * vy)
        return (w1, w2, w3, acc1, acc2, acc3, vp, vy, ap, ay, diss_power)
    return (w1, w2, w3, acc1, acc2, acc3, 0.0, 0.0, 0.0, 0.0, diss_power)


def _rk4_step(params, springs, damper_table, compliance, force_fn, t, y, dt):
    k1 = _deriv(params, springs, damper_table, compliance, force_fn, t, y)
    y2 = tuple(yi + 0.5 * dt * ki for yi, ki in zip(y, k1))
    k2 = _deriv(params, springs, damper_table, compliance, force_fn,
                t + 0.5 * dt, y2)
    y3 = tuple(yi + 0.5 * dt * ki for yi, ki in zip(y, k2))
    k3 = _deriv(params, springs, damper_table, compliance, force_fn,
                t + 0.5 * dt, y3)
    y4 = tuple(yi + dt * ki for yi, ki in zip(y, k3))
    k4 = _deriv(params, springs, damper_table, compliance, force_fn,
                t + dt, y4)
    sixth = dt / 6.0
    y_next = tuple(
        yi + sixth * (a + 2.0 * b + 2.0 * c + d)
        for yi, a, b, c, d in zip(y, k1, k2, k3, k4))

    # joint-limit clamp with zeroing of the outgoing velocity
    q = list(y_next[:3])
    w = list(y_next[3:6])
    for j, (lo, hi) in enumerate(params.joint_limits):
        if q[j] < lo:
            q[j] = lo
            if w[j] < 0.0:
                w[j] = 0.0
        elif q[j] > hi:
            q[j] = hi
            if w[j] > 0.0:
                w[j] = 0.0
    y_next = tuple(q) + tuple(w) + y_next[6:]

    if not all(math.isfinite(v) for v in y_next):
        raise NonFiniteStateError(
            f"state diverged at t = {t + dt:.6f} s; reduce the timestep")
    return y_next


def step_dynamics(params: MechanismParams, springs, dampers,
                  compliance: ComplianceSpec, state: JointState, inputs,
                  dt: float, t: float = 0.0,
                  deflections=(0.0, 0.0, 0.0, 0.0)):
    """One RK4 step; returns (next JointState, next deflections).

    `inputs` is a handle force: None / FreeRelease, a constant (fx, fy, fz),
    one of the signal specs, or a callable t -> force evaluated at the RK4
    stage times. `deflections` packs (delta_p, delta_y, rate_p, rate_y) of
    the compliant mount.
    """
    if not dt > 0.0:
        raise ValueError("dt must be > 0")
    y = state.q + state.qdot + tuple(float(v) for v in deflections) + (0.0,)
    y = _rk4_step(params, springs, _damper_table(dampers), compliance,
                  _force_fn(inputs), t, y, dt)
    return JointState(q=y[:3], qdot=y[3:6]), y[6:10]


def run_scenario(params: MechanismParams, springs, dampers,
                 compliance: ComplianceSpec, scenario: Scenario) -> SimResult:
    """Deterministic fixed-step rollout of one scenario.

    A spoon contact lands on the nearest step boundary as a velocity jump
    of the compliant mount; the recorded row at that step is post-impulse.
    With a rigid mount there is no deflection state, so the contact event
    has no effect here (use spoon_contact_response for the rigid-side
    comparison numbers). A PrescribedTrajectory input switches to
    kinematic playback: joints follow IK of the interpolated waypoints and
    no forces are integrated.
    """
    if isinstance(scenario.input, PrescribedTrajectory):
        return _run_prescribed(params, springs, scenario)

    n = scenario.steps
    dt = scenario.timestep
    damper_table = _damper_table(dampers)
    force_fn = _force_fn(scenario.input)

    t = np.empty(n)
    q = np.empty((n, 3))
    qdot = np.empty((n, 3))
    spoon = np.empty((n, 3))
    handle = np.empty((n, 3))
    deflection = np.zeros((n, 2))
    deflection_rate = np.zeros((n, 2))
    applied = np.zeros((n, 3))
    e_kin = np.empty(n)
    e_pot = np.empty(n)
    e_diss = np.empty(n)

    contact = scenario.spoon_contact
    contact_step = None
    if contact is not None and compliance.mode is ComplianceMode.COMPLIANT:
        contact_step = min(max(int(round(contact.time / dt)), 0), n - 1)

    y = scenario.initial.q + scenario.initial.qdot + (0.0,) * 5
    for k in range(n):
        tk = k * dt
        if k == contact_step:
            # impulse lands here: instantaneous velocity jump on the mount
            inv_i = 1.0 / compliance.inertia
            y = (y[:8] + (y[8] + contact.impulse_pitch * inv_i,
                          y[9] + contact.impulse_yaw * inv_i) + (y[10],))

        state = JointState(q=y[:3], qdot=y[3:6])
        t[k] = tk
        q[k] = y[:3]
        qdot[k] = y[3:6]
        spoon[k] = spoon_pose(params, state).position
        handle[k] = handle_pose(params, state).position
        deflection[k] = y[6:8]
        deflection_rate[k] = y[8:10]
        if force_fn is not None:
            applied[k] = handle_jacobian(params, state).T @ np.asarray(
                force_fn(tk), dtype=float)
        e_kin[k] = kinetic_energy(params, state)
        e_pot[k] = potential_energy(params, springs, state)
        if compliance.mode is ComplianceMode.COMPLIANT:
            kr = compliance.stiffness
            e_pot[k] += 0.5 * kr * (y[6] ** 2 + y[7] ** 2)
            e_kin[k] += 0.5 * compliance.inertia * (y[8] ** 2 + y[9] ** 2)
        e_diss[k] = y[10]

        if k < n - 1:
            y = _rk4_step(params, springs, damper_table, compliance,
                          force_fn, tk, y, dt)

    return SimResult(t, q, qdot, spoon, handle, deflection, deflection_rate,
                     applied, e_kin, e_pot, e_diss)


def _run_prescribed(params: MechanismParams, springs,
                    scenario: Scenario) -> SimResult:
    """Kinematic playback of a prescribed utensil trajectory."""
    wps = scenario.input.waypoints
    times = [wp[0] for wp in wps]
    n = scenario.steps
    dt = scenario.timestep

    t = np.arange(n) * dt
    q = np.empty((n, 3))
    for k, tk in enumerate(t):
        tk = float(tk)
        if tk <= times[0]:
            pos = wps[0][1:]
        elif tk >= times[-1]:
            pos = wps[-1][1:]
        else:
            i = max(j for j, tj in enumerate(times) if tj <= tk)
            t0, t1 = times[i], times[i + 1]
            u = (tk - t0) / (t1 - t0)
            pos = tuple(a + u * (b - a)
                        for a, b in zip(wps[i][1:], wps[i + 1][1:]))
        q[k] = inverse_kinematics(params, pos).q

    qdot = np.gradient(q, dt, axis=0)
    spoon = np.empty((n, 3))
    handle = np.empty((n, 3))
    e_kin = np.empty(n)
    e_pot = np.empty(n)
    for k in range(n):
        state = JointState(q=tuple(q[k]), qdot=tuple(qdot[k]))
        spoon[k] = spoon_pose(params, state).position
        handle[k] = handle_pose(params, state).position
        e_kin[k] = kinetic_energy(params, state)
        e_pot[k] = potential_energy(params, springs, state)

    zeros2 = np.zeros((n, 2))
    return SimResult(t, q, qdot, spoon, handle, zeros2, zeros2.copy(),
                     np.zeros((n, 3)), e_kin, e_pot, np.zeros(n))


# ---------------------------------------------------------------------------
# compliant-mount contact study


def spoon_contact_response(params: MechanismParams,
                           compliance: ComplianceSpec, impulse: float,
                           dt: float = DEFAULT_TIMESTEP,
                           duration: float = 5.0) -> ContactResponse:
    """Response of the utensil mount to an impulse torque (N*m*s).

    Compliant mode integrates one deflection axis under the impulse and
    reports the peak reaction torque |k_r*d + c_r*d'|, the settling time
    into the recenter tolerance, and whether recentering happened within
    the horizon. Rigid mode has no deflection dynamics at all; as the
    comparison value it reports the impulse spread over a single timestep,
    flagged model-dependent because it scales with 1/dt.
    """
    if not math.isfinite(impulse):
        raise ValueError("impulse must be finite")
    if compliance.mode is ComplianceMode.RIGID:
        return ContactResponse(peak_torque=abs(impulse) / dt,
                               settling_time=0.0, recentered=True,
                               model_dependent=True)

    k_r, c_r = compliance.stiffness, compliance.damping
    inv_i = 1.0 / compliance.inertia
    eps = compliance.recenter_tolerance

    def deriv(s):
        d, v = s
        return (v, (-k_r * d - c_r * v) * inv_i)

    n = int(math.floor(duration / dt)) + 1
    d, v = 0.0, impulse * inv_i
    peak = 0.0
    max_defl = 0.0
    last_outside = 0 if abs(d) >= eps else -1
    for k in range(n):
        reaction = abs(k_r * d + c_r * v)
        if reaction > peak:
            peak = reaction
        if abs(d) > max_defl:
            max_defl = abs(d)
        if abs(d) >= eps:
            last_outside = k
        if k < n - 1:
            k1 = deriv((d, v))
            k2 = deriv((d + 0.5 * dt * k1[0], v + 0.5 * dt * k1[1]))
            k3 = deriv((d + 0.5 * dt * k2[0], v + 0.5 * dt * k2[1]))
            k4 = deriv((d + dt * k3[0], v + dt * k3[1]))
            d += dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            v += dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])

    if max_defl > compliance.deflection_limit:
        raise DeflectionExceededError(
            f"deflection {max_defl:.4f} rad exceeds the "
            f"{compliance.deflection_limit:.4f} rad validity limit")

    recentered = last_outside < n - 1
    settling = (last_outside + 1) * dt if recentered else math.inf
    if last_outside == -1:
        settling = 0.0
    return ContactResponse(peak_torque=peak, settling_time=settling,
                           recentered=recentered)
