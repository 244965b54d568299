"""
Rotor aerodynamics for a variable-pitch propeller in hover.

Blade element theory with uniform momentum inflow maps a blade collective
pitch to thrust and torque coefficients (and back). All coefficient functions
accept scalars or numpy arrays; negative collective produces negative thrust
by odd symmetry of a symmetric airfoil.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from vpquad import config

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class RotorModel:
    """Blade geometry and aero constants of one rotor (all four are identical)."""

    radius: float = config.ROTOR_RADIUS
    chord: float = config.ROTOR_CHORD
    blade_count: int = config.ROTOR_BLADE_COUNT
    lift_slope: float = config.ROTOR_LIFT_SLOPE
    zero_lift_drag: float = config.ROTOR_ZERO_LIFT_DRAG
    rot_speed: float = config.ROTOR_SPEED
    air_density: float = config.AIR_DENSITY
    collective_limit: float = config.COLLECTIVE_LIMIT

    def __post_init__(self):
        checks = {
            "radius": self.radius > 0,
            "chord": self.chord > 0,
            "blade_count": self.blade_count >= 2,
            "lift_slope": self.lift_slope > 0,
            "zero_lift_drag": self.zero_lift_drag >= 0,
            "rot_speed": self.rot_speed > 0,
            "air_density": self.air_density > 0,
            "collective_limit": self.collective_limit > 0,
        }
        for name, ok in checks.items():
            if not ok:
                raise ValueError(f"RotorModel.{name} out of range: {getattr(self, name)!r}")

    @property
    def solidity(self) -> float:
        return self.blade_count * self.chord / (math.pi * self.radius)

    @property
    def disk_area(self) -> float:
        return math.pi * self.radius**2

    @property
    def tip_speed(self) -> float:
        return self.rot_speed * self.radius

    @property
    def thrust_gain(self) -> float:
        """K = rho A V_tip^2 (N per unit thrust coefficient)."""
        return self.air_density * self.disk_area * self.tip_speed**2

    @property
    def torque_gain(self) -> float:
        """K R (N m per unit torque coefficient)."""
        return self.thrust_gain * self.radius

    @cached_property
    def ct_max(self) -> float:
        """Thrust coefficient reached at the collective limit."""
        return ct_from_collective(self.collective_limit, self)


@dataclass(frozen=True)
class RotorCommand:
    """One rotor's operating point."""

    collective: float  # rad, signed
    thrust_coeff: float
    torque_coeff: float
    inflow: float
    clamped: bool = False


def _unwrap(values: np.ndarray):
    # scalars in, scalars out
    return values if values.ndim else float(values)


def inflow_ratio(ct):
    """Hover inflow from momentum theory, lambda = sign(ct) sqrt(|ct|/2)."""
    ct = np.asarray(ct, dtype=float)
    return _unwrap(np.sign(ct) * np.sqrt(np.abs(ct) / 2.0))


def collective_from_ct(ct, rotor: RotorModel):
    """Collective pitch (rad) that produces the thrust coefficient ct."""
    ct = np.asarray(ct, dtype=float)
    mag = np.abs(ct)
    theta = 6.0 * mag / (rotor.solidity * rotor.lift_slope) + 1.5 * np.sqrt(mag / 2.0)
    return _unwrap(np.sign(ct) * theta)


def ct_from_collective(theta0, rotor: RotorModel):
    """
    Thrust coefficient for a blade collective.

    With s = sqrt(|C_T|) the thrust equation is the quadratic
    s^2 + b s - a |theta0| = 0; the positive root is evaluated without
    cancellation as 2 a |theta0| / (b + sqrt(b^2 + 4 a |theta0|)).
    """
    theta0 = np.asarray(theta0, dtype=float)
    sigma_cla = rotor.solidity * rotor.lift_slope
    a = sigma_cla / 6.0
    b = sigma_cla / (4.0 * SQRT2)
    at = a * np.abs(theta0)
    s = 2.0 * at / (b + np.sqrt(b * b + 4.0 * at))
    return _unwrap(np.sign(theta0) * s * s)


def cq_from_ct(ct, rotor: RotorModel):
    """Torque coefficient magnitude; the spin sense is applied by the wrench."""
    mag = np.abs(np.asarray(ct, dtype=float))
    return _unwrap(mag**1.5 / SQRT2 + rotor.solidity * rotor.zero_lift_drag / 8.0)


def dimensionalize(ct, cq, rotor: RotorModel):
    """Convert (C_T, C_Q) to (thrust N, torque N m)."""
    thrust = rotor.thrust_gain * np.asarray(ct, dtype=float)
    torque = rotor.torque_gain * np.asarray(cq, dtype=float)
    return _unwrap(thrust), _unwrap(torque)


def thrust_residual(ct, theta0, rotor: RotorModel):
    """Residual of the blade-element thrust equation with hover inflow substituted."""
    ct = np.asarray(ct, dtype=float)
    lam = np.sign(ct) * np.sqrt(np.abs(ct) / 2.0)
    sigma_cla = rotor.solidity * rotor.lift_slope
    return _unwrap(ct - 0.5 * sigma_cla * (np.asarray(theta0, dtype=float) / 3.0 - lam / 2.0))


def command_from_collective(theta0: float, rotor: RotorModel) -> RotorCommand:
    """Operating point for a collective, clamped to the swashplate travel."""
    limit = rotor.collective_limit
    clamped = abs(theta0) > limit
    if clamped:
        logger.debug("collective %.4f rad clamped to +-%.4f", theta0, limit)
        theta0 = math.copysign(limit, theta0)
    ct = ct_from_collective(theta0, rotor)
    return RotorCommand(
        collective=float(theta0),
        thrust_coeff=ct,
        torque_coeff=cq_from_ct(ct, rotor),
        inflow=inflow_ratio(ct),
        clamped=clamped,
    )


def command_from_ct(ct: float, rotor: RotorModel) -> RotorCommand:
    """Operating point for a requested thrust coefficient."""
    return command_from_collective(collective_from_ct(ct, rotor), rotor)
