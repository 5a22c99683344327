"""Toolkit for a passive, spring-balanced 3-DoF feeding-assistance arm.

Covers the geometric model (forward/inverse kinematics, both handle
arrangements), static gravity balancing with linear or torsion springs,
damped rigid-body dynamics with a compliant utensil mount, and the design
studies built on top of them. See the README for the CLI.
"""

from .analysis import (
    Excursion,
    StabilizationReport,
    TrajectorySpec,
    WorkspaceSample,
    WorkspaceSummary,
    calibrate_handle_distance,
    compare_handle_variants,
    handle_excursion,
    stabilization_report,
    trajectory_states,
    workspace_sample,
)
from .config import (
    ConfigFile,
    default_config_path,
    load_config,
    load_scenario,
    save_config,
    save_scenario,
)
from .dynamics import (
    ComplianceMode,
    ComplianceSpec,
    ContactResponse,
    DamperModel,
    DamperSpec,
    FreeRelease,
    NoiseTremor,
    PrescribedTrajectory,
    Scenario,
    SimResult,
    SineTremor,
    SpasmImpulse,
    SpoonContact,
    coriolis_matrix,
    damper_torque,
    generate_signal,
    kinetic_energy,
    mass_matrix,
    potential_energy,
    run_scenario,
    spoon_contact_response,
    step_dynamics,
)
from .errors import (
    ConfigError,
    DeflectionExceededError,
    GridMismatchError,
    InfeasibleBoundsError,
    LimitViolationError,
    NonFiniteStateError,
    NotBracketedError,
    ParseError,
    SpoonArmError,
    UnreachableError,
    ValidationError,
    VersionMismatchError,
)
from .kinematics import (
    Handedness,
    HandleVariant,
    Joint,
    JointState,
    MechanismParams,
    Pose,
    forward_kinematics,
    handle_jacobian,
    handle_pose,
    inverse_kinematics,
    jacobian,
    spoon_pose,
)
from .statics import (
    BalanceResult,
    SpringKind,
    SpringSpec,
    TorqueProfile,
    gravity_torque,
    holding_force,
    residual_torque_profile,
    spring_torque,
    synthesize_balancing,
)

__version__ = "0.1.0"

__all__ = [
    "BalanceResult",
    "ComplianceMode",
    "ComplianceSpec",
    "ConfigError",
    "ConfigFile",
    "ContactResponse",
    "DamperModel",
    "DamperSpec",
    "DeflectionExceededError",
    "Excursion",
    "FreeRelease",
    "GridMismatchError",
    "Handedness",
    "HandleVariant",
    "InfeasibleBoundsError",
    "Joint",
    "JointState",
    "LimitViolationError",
    "MechanismParams",
    "NoiseTremor",
    "NonFiniteStateError",
    "NotBracketedError",
    "ParseError",
    "Pose",
    "PrescribedTrajectory",
    "Scenario",
    "SimResult",
    "SineTremor",
    "SpasmImpulse",
    "SpoonArmError",
    "SpoonContact",
    "SpringKind",
    "SpringSpec",
    "StabilizationReport",
    "TorqueProfile",
    "TrajectorySpec",
    "UnreachableError",
    "ValidationError",
    "VersionMismatchError",
    "WorkspaceSample",
    "WorkspaceSummary",
    "calibrate_handle_distance",
    "compare_handle_variants",
    "coriolis_matrix",
    "damper_torque",
    "default_config_path",
    "forward_kinematics",
    "generate_signal",
    "gravity_torque",
    "handle_excursion",
    "handle_jacobian",
    "handle_pose",
    "holding_force",
    "inverse_kinematics",
    "jacobian",
    "kinetic_energy",
    "load_config",
    "load_scenario",
    "mass_matrix",
    "potential_energy",
    "residual_torque_profile",
    "run_scenario",
    "save_config",
    "save_scenario",
    "spoon_contact_response",
    "spoon_pose",
    "spring_torque",
    "stabilization_report",
    "step_dynamics",
    "synthesize_balancing",
    "trajectory_states",
    "workspace_sample",
]
