"""
Six degree-of-freedom rigid-body model of the quadrotor.

State vector layout (float64, length 12)::

    [x y z | phi theta psi | u v w | p q r]

Position is inertial with z pointing down, velocities and rates are body
axes. Total thrust is carried signed, with the thrust-direction flag
``flag = -sgn(cos phi)`` already applied, so upright hover has T = -Mg and
the physical body-z force is ``-flag * T``.
"""

import math
from dataclasses import dataclass

import numpy as np

from vpquad import config
from vpquad.core.errors import SingularAttitude
from vpquad.core.rotor_aero import (
    RotorModel,
    collective_from_ct,
    cq_from_ct,
    dimensionalize,
    inflow_ratio,
)

STATE_FIELDS = ("x", "y", "z", "phi", "theta", "psi", "u", "v", "w", "p", "q", "r")
POS = slice(0, 3)
EULER = slice(3, 6)
VEL = slice(6, 9)
RATES = slice(9, 12)

# rotor layout signs, rotors 1..4
ROLL_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])
PITCH_SIGNS = np.array([1.0, 1.0, -1.0, -1.0])
YAW_SIGNS = np.array([1.0, -1.0, 1.0, -1.0])

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class VehicleParams:
    """Mass properties and geometry; products of inertia are zero by symmetry."""

    mass: float = config.VEHICLE_MASS
    ixx: float = config.VEHICLE_IXX
    iyy: float = config.VEHICLE_IYY
    izz: float = config.VEHICLE_IZZ
    arm: float = config.VEHICLE_ARM
    gravity: float = config.GRAVITY

    def __post_init__(self):
        for name in ("mass", "ixx", "iyy", "izz", "arm", "gravity"):
            if not getattr(self, name) > 0:
                raise ValueError(f"VehicleParams.{name} must be positive: {getattr(self, name)!r}")

    @property
    def weight(self) -> float:
        return self.mass * self.gravity

    @property
    def inertia(self) -> np.ndarray:
        return np.array([self.ixx, self.iyy, self.izz])


@dataclass(frozen=True)
class Wrench:
    """Total thrust (signed, flag applied) and body moments."""

    thrust: float
    roll: float
    pitch: float
    yaw: float
    flag: float

    @property
    def moments(self) -> np.ndarray:
        return np.array([self.roll, self.pitch, self.yaw])

    @property
    def body_force_z(self) -> float:
        return -self.flag * self.thrust


@dataclass(frozen=True)
class HoverTrim:
    """Per-rotor operating point that balances the weight with zero moments."""

    thrust_coeff: float
    collective: float
    inflow: float
    torque_coeff: float
    rotor_thrust: float  # N
    rotor_torque: float  # N m
    thrust_gain: float  # K, N


def make_state(**fields: float) -> np.ndarray:
    """Build a state vector from named components; unspecified ones are zero."""
    unknown = set(fields) - set(STATE_FIELDS)
    if unknown:
        raise KeyError(f"unknown state fields: {sorted(unknown)}")
    return np.array([float(fields.get(name, 0.0)) for name in STATE_FIELDS])


def thrust_flag(phi: float) -> float:
    """-sgn(cos phi) with sgn(0) = +1, so the flag is -1 at exactly 90 deg."""
    return 1.0 if math.cos(phi) < 0.0 else -1.0


def rotation_body_to_inertial(phi: float, theta: float, psi: float) -> np.ndarray:
    """Z-Y-X Euler direction-cosine matrix taking body vectors to the inertial frame."""
    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(psi), math.sin(psi)
    return np.array(
        [
            [ct * cp, sf * st * cp - cf * sp, cf * st * cp + sf * sp],
            [ct * sp, sf * st * sp + cf * cp, cf * st * sp - sf * cp],
            [-st, sf * ct, cf * ct],
        ]
    )


def euler_rate_matrix(phi: float, theta: float, eps_sing: float = config.SINGULARITY_EPS) -> np.ndarray:
    """Matrix mapping body rates (p, q, r) to Euler-angle rates."""
    ct = math.cos(theta)
    if abs(ct) <= eps_sing:
        raise SingularAttitude(theta, ct)
    cf, sf = math.cos(phi), math.sin(phi)
    tt = math.sin(theta) / ct
    return np.array(
        [
            [1.0, sf * tt, cf * tt],
            [0.0, cf, -sf],
            [0.0, sf / ct, cf / ct],
        ]
    )


def euler_rates(
    p: float, q: float, r: float, phi: float, theta: float, eps_sing: float = config.SINGULARITY_EPS
) -> np.ndarray:
    """Euler-angle rates (phi_dot, theta_dot, psi_dot) from body rates."""
    ct = math.cos(theta)
    if abs(ct) <= eps_sing:
        raise SingularAttitude(theta, ct)
    cf, sf = math.cos(phi), math.sin(phi)
    lateral = q * sf + r * cf
    return np.array([p + math.tan(theta) * lateral, q * cf - r * sf, lateral / ct])


def euler_to_body_matrix(phi: float, theta: float) -> np.ndarray:
    """Inverse of the Euler-rate matrix: body rates from Euler-angle rates."""
    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [1.0, 0.0, -st],
            [0.0, cf, sf * ct],
            [0.0, -sf, cf * ct],
        ]
    )


def euler_to_body_matrix_rate(phi: float, theta: float, phi_dot: float, theta_dot: float) -> np.ndarray:
    """Time derivative of :func:`euler_to_body_matrix` along (phi_dot, theta_dot)."""
    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [0.0, 0.0, -ct * theta_dot],
            [0.0, -sf * phi_dot, cf * ct * phi_dot - sf * st * theta_dot],
            [0.0, -cf * phi_dot, -sf * ct * phi_dot - cf * st * theta_dot],
        ]
    )


def euler_to_body_matrix_accel(
    phi: float, theta: float, phi_dot: float, theta_dot: float, phi_ddot: float, theta_ddot: float
) -> np.ndarray:
    """Second time derivative of :func:`euler_to_body_matrix`."""
    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    sq = phi_dot * phi_dot + theta_dot * theta_dot
    cross = phi_dot * theta_dot
    return np.array(
        [
            [0.0, 0.0, st * theta_dot * theta_dot - ct * theta_ddot],
            [
                0.0,
                -cf * phi_dot * phi_dot - sf * phi_ddot,
                -sf * ct * sq - 2.0 * cf * st * cross + cf * ct * phi_ddot - sf * st * theta_ddot,
            ],
            [
                0.0,
                sf * phi_dot * phi_dot - cf * phi_ddot,
                -cf * ct * sq + 2.0 * sf * st * cross - sf * ct * phi_ddot - cf * st * theta_ddot,
            ],
        ]
    )


def body_rates_from_euler_rates(euler_dot: np.ndarray, phi: float, theta: float) -> np.ndarray:
    return euler_to_body_matrix(phi, theta) @ np.asarray(euler_dot, dtype=float)


def wrench_from_cts(ct: np.ndarray, flag: float, rotor: RotorModel, veh: VehicleParams) -> Wrench:
    """Total thrust and body moments produced by four rotor thrust coefficients."""
    ct = np.asarray(ct, dtype=float)
    k = rotor.thrust_gain
    d = veh.arm
    return Wrench(
        thrust=flag * k * float(ct.sum()),
        roll=d * k * float(ROLL_SIGNS @ ct),
        pitch=-flag * k * d * float(PITCH_SIGNS @ ct),
        yaw=-flag * (rotor.torque_gain / SQRT2) * float(YAW_SIGNS @ np.abs(ct) ** 1.5),
        flag=flag,
    )


def body_angular_acceleration(rates: np.ndarray, moments: np.ndarray, veh: VehicleParams) -> np.ndarray:
    """Rotational dynamics with gyroscopic coupling (principal axes)."""
    p, q, r = rates
    l, m, n = moments
    return np.array(
        [
            (veh.iyy - veh.izz) / veh.ixx * q * r + l / veh.ixx,
            (veh.izz - veh.ixx) / veh.iyy * p * r + m / veh.iyy,
            (veh.ixx - veh.iyy) / veh.izz * p * q + n / veh.izz,
        ]
    )


def inertial_acceleration(s: np.ndarray, wr: Wrench, veh: VehicleParams) -> np.ndarray:
    """Translational dynamics expressed in the inertial frame."""
    rot = rotation_body_to_inertial(s[3], s[4], s[5])
    acc = rot[:, 2] * (wr.body_force_z / veh.mass)
    acc[2] += veh.gravity
    return acc


def state_derivative(
    s: np.ndarray, wr: Wrench, veh: VehicleParams, eps_sing: float = config.SINGULARITY_EPS
) -> np.ndarray:
    """Time derivative of the 12-state under the given wrench."""
    phi, theta, psi = s[3], s[4], s[5]
    u, v, w = s[6], s[7], s[8]
    p, q, r = s[9], s[10], s[11]
    rot = rotation_body_to_inertial(phi, theta, psi)
    g = veh.gravity

    out = np.empty(12)
    out[POS] = rot @ s[VEL]
    out[EULER] = euler_rates(p, q, r, phi, theta, eps_sing)
    # gravity in body axes is g times the last row of the DCM
    out[6] = g * rot[2, 0] + r * v - q * w
    out[7] = g * rot[2, 1] + p * w - u * r
    out[8] = wr.body_force_z / veh.mass + g * rot[2, 2] + q * u - p * v
    out[RATES] = body_angular_acceleration(s[RATES], (wr.roll, wr.pitch, wr.yaw), veh)
    return out


def hover_trim(rotor: RotorModel, veh: VehicleParams) -> HoverTrim:
    """Equal per-rotor thrust coefficient that balances the weight."""
    ct = veh.weight / (4.0 * rotor.thrust_gain)
    cq = cq_from_ct(ct, rotor)
    thrust, torque = dimensionalize(ct, cq, rotor)
    return HoverTrim(
        thrust_coeff=ct,
        collective=collective_from_ct(ct, rotor),
        inflow=inflow_ratio(ct),
        torque_coeff=cq,
        rotor_thrust=thrust,
        rotor_torque=torque,
        thrust_gain=rotor.thrust_gain,
    )
