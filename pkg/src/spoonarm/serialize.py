"""CSV emitters for time series and comparison tables.

Every float is written as repr() produces it: the shortest decimal string
that round-trips to the same double. Identical inputs therefore yield
byte-identical files, which is what the golden tests pin.
"""

from __future__ import annotations

import numpy as np

SIM_HEADER = ("t,phi1,theta2,theta3,dphi1,dtheta2,dtheta3,"
              "spoon_x,spoon_y,spoon_z,handle_x,handle_y,handle_z,"
              "delta_p,delta_y,E_kin,E_pot,E_diss")
BALANCE_HEADER = "angle_rad,tau_gravity,tau_spring,tau_residual"
COMPARE_HEADER = "variant,d_h,spoon_rise_m,handle_rise_m,ratio"
WORKSPACE_HEADER = "x,y,z"


def fmt(value) -> str:
    """Shortest round-trip decimal for a float; plain str otherwise."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_rows(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def sim_rows(result):
    for k in range(len(result)):
        yield (result.t[k], *result.q[k], *result.qdot[k],
               *result.spoon_pos[k], *result.handle_pos[k],
               *result.deflection[k],
               result.e_kin[k], result.e_pot[k], result.e_diss[k])


def write_sim_csv(result, path):
    """One row per step, SIM_HEADER columns, SI units throughout."""
    _write_rows(path, SIM_HEADER, sim_rows(result))


def write_balance_csv(params, springs, profiles, path):
    """Residual torque table for both lifted joints, stacked.

    `profiles` are the per-joint residual TorqueProfiles; gravity and
    spring columns are recomputed per row so the file is self-checking
    (residual = gravity + spring).
    """
    from .statics import gravity_torque, spring_joint_torques
    from .kinematics import JointState

    def rows():
        for profile in profiles:
            j = profile.joint
            for angle, residual in zip(profile.angles, profile.torques):
                q = [0.0, 0.0, 0.0]
                q[j] = float(angle)
                state = JointState(q=tuple(q))
                tau_g = gravity_torque(params, state)[j - 1]
                tau_s = spring_joint_torques(springs, state)[j]
                yield (float(angle), tau_g, tau_s, residual)

    _write_rows(path, BALANCE_HEADER, rows())


def write_compare_csv(rows, path):
    """Handle-excursion comparison table (one row per variant)."""
    _write_rows(path, COMPARE_HEADER, rows)


def write_workspace_csv(points, path):
    """Utensil point cloud, one x,y,z row per unique sample."""
    _write_rows(path, WORKSPACE_HEADER, points)
