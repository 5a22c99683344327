"""The documented nominal build: one place that says what "default" means.

The bracket radius is the one number here that is calibrated rather than
chosen: it is the bisection solution that makes the nominal plate-to-mouth
motion (33 cm utensil rise) cost 24 cm of handle rise. The shipped config
file under data/ is generated from these constructors and locked by a
golden-equality test; regenerate it with `python3 -m spoonarm.defaults`
after changing anything CALIBRATED_HANDLE_DISTANCE_M depends on.
"""

from __future__ import annotations

from dataclasses import replace

from .analysis import TrajectorySpec
from .config import ConfigFile
from .dynamics import ComplianceSpec, DamperModel, DamperSpec
from .kinematics import Joint, MechanismParams
from .statics import SpringKind, synthesize_balancing

# calibrate_handle_distance(MechanismParams(), TrajectorySpec(), 0.24,
# tolerance=1e-12); handle rise at this radius is 0.24 m to within 1e-12
CALIBRATED_HANDLE_DISTANCE_M = 0.15978814350736176


def nominal_params() -> MechanismParams:
    """Nominal mechanism with the calibrated bracket radius."""
    return MechanismParams(handle_distance=CALIBRATED_HANDLE_DISTANCE_M)


def nominal_trajectory() -> TrajectorySpec:
    return TrajectorySpec()


def balanced_springs(params: MechanismParams | None = None) -> tuple:
    """Exact zero-free-length balancing pair for the given build."""
    return synthesize_balancing(
        params if params is not None else nominal_params(),
        SpringKind.LINEAR_ZERO_FREE_LENGTH).springs


def default_dampers() -> tuple:
    # plain viscous units on both lifted joints (the dead-zone model exists
    # for comparison studies); coefficients are stand-ins, the vendor
    # catalog value is not public
    return (
        DamperSpec(Joint.J2, DamperModel.VISCOUS, coefficient=0.4),
        DamperSpec(Joint.J3, DamperModel.VISCOUS, coefficient=0.4),
    )


def default_compliance() -> ComplianceSpec:
    return ComplianceSpec()


def default_config() -> ConfigFile:
    return ConfigFile(
        mechanism=nominal_params(),
        springs=balanced_springs(),
        dampers=default_dampers(),
        compliance=default_compliance(),
    )


def example_scenario():
    """The shipped sample rollout: a sine tremor at the plate pose."""
    from .dynamics import Scenario, SineTremor
    from .kinematics import inverse_kinematics

    plate = nominal_trajectory().points()[0]
    return Scenario(duration=4.0, timestep=1e-3,
                    initial=inverse_kinematics(nominal_params(), plate),
                    input=SineTremor(amplitude=0.15, frequency=2.0))


def _regenerate():
    from .config import default_config_path, save_config, save_scenario
    from importlib import resources

    config_target = default_config_path()
    save_config(default_config(), config_target)
    scenario_target = resources.files("spoonarm").joinpath(
        "data/example_scenario.json")
    save_scenario(example_scenario(), scenario_target)
    return config_target, scenario_target


if __name__ == "__main__":
    for path in _regenerate():
        print(path)
