"""
Three-loop nonlinear dynamic inversion autopilot for the variable-pitch quadrotor.

Outer loop: position error -> commanded accelerations -> total thrust and
attitude command. Inner loop: attitude error -> desired body accelerations
and body moments. Allocation loop: body-rate error -> moment and thrust
rates -> rates of the four rotor thrust coefficients (the virtual control),
which are integrated to give the coefficients actually flown.

Derivatives of the command signals come from filtered differentiation; the
state-dependent part of the desired body jerk is differentiated exactly,
using the body acceleration the current coefficients produce. Thrust, roll
and pitch take priority in the allocation; the yaw demand is scaled back
when it would drive a rotor past the yaw collective limit.

Thrust is expressed in the wrench convention of ``rigid_body``: total thrust
is negative in hover both upright and inverted, and the thrust-direction
flag ``-sgn(cos phi)`` carries the orientation.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from vpquad import config
from vpquad.core.errors import DegenerateThrust, IllConditionedAllocation
from vpquad.core.references import ReferencePoint
from vpquad.core.rigid_body import (
    EULER,
    POS,
    RATES,
    VEL,
    VehicleParams,
    body_angular_acceleration,
    euler_rates,
    euler_to_body_matrix,
    euler_to_body_matrix_accel,
    euler_to_body_matrix_rate,
    hover_trim,
    rotation_body_to_inertial,
    thrust_flag,
    wrench_from_cts,
)
from vpquad.core.rotor_aero import RotorCommand, RotorModel, command_from_ct, ct_from_collective

logger = logging.getLogger(__name__)

YAW_NULL_DIRECTION = np.array([1.0, -1.0, 1.0, -1.0]) / 2.0
BODY_RATE_SOURCES = ("integrated", "command")


def _positive_triple(name: str, values) -> None:
    if len(values) != 3 or not all(v > 0 for v in values):
        raise ValueError(f"Gains.{name} must be three positive values: {values!r}")


def wrap_angle(angle):
    """Wrap to (-pi, pi]."""
    return np.arctan2(np.sin(angle), np.cos(angle))


@dataclass(frozen=True)
class Gains:
    """Damping ratios and natural frequencies per axis for the three loops."""

    zeta_outer: tuple[float, float, float] = config.ZETA_OUTER
    omega_outer: tuple[float, float, float] = config.OMEGA_OUTER
    zeta_inner: tuple[float, float, float] = config.ZETA_INNER
    omega_inner: tuple[float, float, float] = config.OMEGA_INNER
    zeta_allocation: tuple[float, float, float] = config.ZETA_ALLOCATION
    omega_allocation: tuple[float, float, float] = config.OMEGA_ALLOCATION
    kp: float = config.THRUST_RATE_GAIN

    def __post_init__(self):
        for name in ("zeta_outer", "omega_outer", "zeta_inner", "omega_inner", "zeta_allocation", "omega_allocation"):
            _positive_triple(name, getattr(self, name))
        if not self.kp > 0:
            raise ValueError(f"Gains.kp must be positive: {self.kp!r}")

    @cached_property
    def outer_damping(self) -> np.ndarray:
        return 2.0 * np.array(self.zeta_outer) * np.array(self.omega_outer)

    @cached_property
    def outer_stiffness(self) -> np.ndarray:
        return np.array(self.omega_outer) ** 2

    @cached_property
    def inner_damping(self) -> np.ndarray:
        return 2.0 * np.array(self.zeta_inner) * np.array(self.omega_inner)

    @cached_property
    def inner_stiffness(self) -> np.ndarray:
        return np.array(self.omega_inner) ** 2

    @cached_property
    def allocation_damping(self) -> np.ndarray:
        return 2.0 * np.array(self.zeta_allocation) * np.array(self.omega_allocation)

    @cached_property
    def allocation_stiffness(self) -> np.ndarray:
        return np.array(self.omega_allocation) ** 2


@dataclass(frozen=True)
class ControllerTuning:
    derivative_tau: float = config.DERIVATIVE_FILTER_TAU
    flip_tolerance: float = config.FLIP_LATCH_TOLERANCE
    flip_target: float = config.FLIP_TARGET_ROLL
    ct_floor: float = config.CT_FLOOR
    cond_max: float = config.ALLOCATION_COND_MAX
    min_thrust_fraction: float = config.MIN_THRUST_FRACTION
    eps_sing: float = config.SINGULARITY_EPS
    regularize: bool = True
    yaw_collective_limit: float = config.YAW_COLLECTIVE_LIMIT
    body_rate_source: str = config.BODY_RATE_SOURCE

    def __post_init__(self):
        for name in (
            "derivative_tau",
            "flip_tolerance",
            "ct_floor",
            "cond_max",
            "min_thrust_fraction",
            "eps_sing",
            "yaw_collective_limit",
        ):
            if not getattr(self, name) > 0:
                raise ValueError(f"ControllerTuning.{name} must be positive: {getattr(self, name)!r}")
        if self.body_rate_source not in BODY_RATE_SOURCES:
            raise ValueError(
                f"ControllerTuning.body_rate_source must be one of {BODY_RATE_SOURCES}: {self.body_rate_source!r}"
            )


@dataclass(frozen=True)
class FlipBookkeeping:
    """Desired orientation (sigma_d), flip latch and current thrust-direction flag."""

    sigma_d: int = 1
    flip: int = 0
    flag: float = -1.0

    @property
    def mode_key(self) -> tuple[int, int]:
        return (self.sigma_d, self.flip)


@dataclass(frozen=True)
class OuterCommand:
    thrust: float  # T_d, wrench convention
    phi: float
    theta: float
    psi: float
    ux: float
    uy: float
    accel: np.ndarray  # commanded inertial accelerations
    clamped: int = 0
    held: bool = False

    @property
    def euler(self) -> np.ndarray:
        return np.array([self.phi, self.theta, self.psi])


@dataclass(frozen=True)
class InnerCommand:
    moments: np.ndarray  # (l_d, m_d, n_d)
    body_accel: np.ndarray  # (pdot_d, qdot_d, rdot_d)
    body_rates: np.ndarray  # (p_d, q_d, r_d)
    euler_accel: np.ndarray
    euler_rates: np.ndarray  # measured
    jerk_feedforward: np.ndarray  # command terms of the desired Euler jerk


@dataclass(frozen=True)
class Allocation:
    virtual: np.ndarray  # U = d ct / dt
    rhs: np.ndarray  # (Tdot, ldot, mdot, ndot)
    matrix: np.ndarray
    cond: float
    regularized: bool = False
    yaw_scale: float = 1.0  # share of the yaw demand flown


class DirtyDerivative:
    """
    Filtered (backward-Euler) differentiator, d/dt with a first-order lag tau.

    After :meth:`reset` the next update only seeds the memory and returns
    zero, so steps in the input across a reset produce no spike.
    """

    def __init__(self, tau: float):
        self.tau = tau
        self._last: Optional[np.ndarray] = None
        self._rate: Optional[np.ndarray] = None

    @property
    def primed(self) -> bool:
        return self._last is not None

    def reset(self) -> None:
        self._last = None
        self._rate = None

    def update(self, value, dt: float) -> np.ndarray:
        value = np.array(value, dtype=float)
        if self._last is None:
            self._last = value
            self._rate = np.zeros_like(value)
        else:
            self._rate = (self.tau * self._rate + (value - self._last)) / (self.tau + dt)
            self._last = value
        return self._rate.copy()


@dataclass
class ControllerState:
    """Mutable controller memory, owned by a single run."""

    ct: np.ndarray
    cmd_rate: DirtyDerivative
    cmd_accel: DirtyDerivative
    cmd_jerk: DirtyDerivative
    euler_rate_des: Optional[np.ndarray] = None
    last_outer: Optional[OuterCommand] = None
    mode_key: Optional[tuple[int, int]] = None
    counters: dict[str, int] = field(
        default_factory=lambda: {"saturations": 0, "asin_clamps": 0, "regularized": 0, "held": 0, "yaw_limited": 0}
    )

    def reset_filters(self) -> None:
        self.cmd_rate.reset()
        self.cmd_accel.reset()
        self.cmd_jerk.reset()
        self.euler_rate_des = None


def initial_controller_state(
    s: np.ndarray, rotor: RotorModel, veh: VehicleParams, tuning: Optional[ControllerTuning] = None
) -> ControllerState:
    """Fresh controller memory with every rotor at hover trim for the current orientation."""
    tuning = tuning or ControllerTuning()
    flag = thrust_flag(s[3])
    ct0 = -flag * hover_trim(rotor, veh).thrust_coeff
    ct0 = float(np.clip(ct0, -rotor.ct_max, rotor.ct_max))
    return ControllerState(
        ct=np.full(4, ct0),
        cmd_rate=DirtyDerivative(tuning.derivative_tau),
        cmd_accel=DirtyDerivative(tuning.derivative_tau),
        cmd_jerk=DirtyDerivative(tuning.derivative_tau),
    )


def _clamped_asin(arg: float) -> tuple[float, bool]:
    if arg > 1.0:
        return math.pi / 2, True
    if arg < -1.0:
        return -math.pi / 2, True
    return math.asin(arg), False


def outer_loop(
    s: np.ndarray,
    ref: ReferencePoint,
    gains: Gains,
    fb: FlipBookkeeping,
    veh: VehicleParams,
    tuning: ControllerTuning,
    previous: Optional[OuterCommand] = None,
) -> OuterCommand:
    """Position loop: commanded accelerations, total thrust and attitude command."""
    rot = rotation_body_to_inertial(s[3], s[4], s[5])
    vel = rot @ s[VEL]
    accel = (
        np.asarray(ref.acceleration, dtype=float)
        + gains.outer_damping * (np.asarray(ref.velocity, dtype=float) - vel)
        + gains.outer_stiffness * (np.asarray(ref.position, dtype=float) - s[POS])
    )
    if fb.sigma_d == -1 and fb.flip == 0:
        # lateral channels idle until the inversion has latched
        accel[0] = accel[1] = 0.0

    g = veh.gravity
    magnitude = veh.mass * math.sqrt(accel[0] ** 2 + accel[1] ** 2 + (g - accel[2]) ** 2)
    if magnitude < tuning.min_thrust_fraction * veh.weight:
        if previous is None:
            raise DegenerateThrust(
                f"commanded thrust {magnitude:.4f} N below {tuning.min_thrust_fraction:.2f} of the weight"
            )
        logger.debug("degenerate thrust %.4f N, holding previous attitude command", magnitude)
        return OuterCommand(
            thrust=previous.thrust,
            phi=previous.phi,
            theta=previous.theta,
            psi=previous.psi,
            ux=previous.ux,
            uy=previous.uy,
            accel=accel,
            held=True,
        )

    body_force = fb.flag * magnitude
    ux = veh.mass * accel[0] / body_force
    uy = veh.mass * accel[1] / body_force
    psi_d = float(ref.psi)
    cpsi, spsi = math.cos(psi_d), math.sin(psi_d)

    clamped = 0
    phi_d, hit = _clamped_asin(ux * spsi - uy * cpsi)
    clamped += hit
    if fb.sigma_d == -1:
        phi_d = math.pi - phi_d
    cphi = math.cos(phi_d)
    num = ux * cpsi + uy * spsi
    theta_d, hit = _clamped_asin(num / cphi if cphi != 0.0 else math.copysign(2.0, num))
    clamped += hit
    if clamped:
        logger.debug("attitude command asin argument clamped (%d)", clamped)

    return OuterCommand(
        thrust=-magnitude,
        phi=phi_d,
        theta=theta_d,
        psi=psi_d,
        ux=ux,
        uy=uy,
        accel=accel,
        clamped=clamped,
    )


def inner_loop(
    s: np.ndarray,
    oc: OuterCommand,
    gains: Gains,
    prev: ControllerState,
    veh: VehicleParams,
    tuning: ControllerTuning,
    dt: float,
) -> InnerCommand:
    """
    Attitude loop. Updates the command-derivative filters and the desired
    Euler-rate state held in ``prev``.
    """
    phi, theta = s[3], s[4]
    p, q, r = s[RATES]
    euler_dot = euler_rates(p, q, r, phi, theta, tuning.eps_sing)

    cmd = oc.euler
    cmd_rate = prev.cmd_rate.update(cmd, dt)
    cmd_accel = prev.cmd_accel.update(cmd_rate, dt)
    cmd_jerk = prev.cmd_jerk.update(cmd_accel, dt)
    euler_accel = (
        cmd_accel
        + gains.inner_damping * (cmd_rate - euler_dot)
        + gains.inner_stiffness * wrap_angle(cmd - s[EULER])
    )

    e_mat = euler_to_body_matrix(phi, theta)
    e_rate = euler_to_body_matrix_rate(phi, theta, euler_dot[0], euler_dot[1])
    body_accel = e_mat @ euler_accel + e_rate @ euler_dot

    moments = np.array(
        [
            veh.ixx * body_accel[0] + (veh.izz - veh.iyy) * q * r,
            veh.iyy * body_accel[1] + (veh.ixx - veh.izz) * p * r,
            veh.izz * body_accel[2] + (veh.iyy - veh.ixx) * p * q,
        ]
    )

    if prev.euler_rate_des is None:
        prev.euler_rate_des = euler_dot.copy()
    else:
        prev.euler_rate_des = prev.euler_rate_des + dt * (
            euler_accel + (euler_dot - prev.euler_rate_des) / tuning.derivative_tau
        )
    if tuning.body_rate_source == "integrated":
        body_rates = e_mat @ prev.euler_rate_des
    else:
        body_rates = e_mat @ cmd_rate

    return InnerCommand(
        moments=moments,
        body_accel=body_accel,
        body_rates=body_rates,
        euler_accel=euler_accel,
        euler_rates=euler_dot,
        jerk_feedforward=cmd_jerk + gains.inner_damping * cmd_accel + gains.inner_stiffness * cmd_rate,
    )


def desired_body_jerk(
    s: np.ndarray, ic: InnerCommand, rate_dot: np.ndarray, gains: Gains, eps_sing: float = config.SINGULARITY_EPS
) -> np.ndarray:
    """
    Time derivative of the desired body acceleration.

    The command terms arrive filtered in ``ic.jerk_feedforward``; the
    attitude terms use the measured Euler rates and the Euler acceleration
    implied by ``rate_dot``, the body acceleration of the current wrench.
    """
    phi, theta = s[3], s[4]
    euler_dot = ic.euler_rates
    e_mat = euler_to_body_matrix(phi, theta)
    e_rate = euler_to_body_matrix_rate(phi, theta, euler_dot[0], euler_dot[1])
    euler_ddot = euler_rates(*(rate_dot - e_rate @ euler_dot), phi, theta, eps_sing)
    euler_jerk = ic.jerk_feedforward - gains.inner_damping * euler_ddot - gains.inner_stiffness * euler_dot
    e_accel = euler_to_body_matrix_accel(phi, theta, euler_dot[0], euler_dot[1], euler_ddot[0], euler_ddot[1])
    return e_mat @ euler_jerk + e_rate @ (ic.euler_accel + euler_ddot) + e_accel @ euler_dot


def allocation_matrix(
    ct: np.ndarray, flag: float, rotor: RotorModel, veh: VehicleParams, ct_floor: float = config.CT_FLOOR
) -> np.ndarray:
    """Jacobian of (T, l, m, n) with respect to the four thrust coefficients."""
    k = rotor.thrust_gain
    d = veh.arm
    ct = np.asarray(ct, dtype=float)
    mag = np.maximum(np.abs(ct), ct_floor)
    sign = np.where(ct >= 0.0, 1.0, -1.0)
    yaw_row = -flag * 1.5 * rotor.torque_gain * np.sqrt(mag / 2.0) * sign * np.array([1.0, -1.0, 1.0, -1.0])
    return np.vstack(
        [
            flag * k * np.ones(4),
            d * k * np.array([1.0, -1.0, -1.0, 1.0]),
            -flag * k * d * np.array([1.0, 1.0, -1.0, -1.0]),
            yaw_row,
        ]
    )


def _regularized_solve(matrix: np.ndarray, rhs: np.ndarray, cond_max: float) -> np.ndarray:
    # thrust/roll/pitch rows solved exactly (minimum norm), yaw along their null direction by damped LS
    upper = matrix[:3]
    base = upper.T @ np.linalg.solve(upper @ upper.T, rhs[:3])
    gain = float(matrix[3] @ YAW_NULL_DIRECTION)
    residual = float(rhs[3] - matrix[3] @ base)
    damping = np.linalg.norm(matrix[0]) / cond_max
    alpha = gain * residual / (gain * gain + damping * damping)
    return base + alpha * YAW_NULL_DIRECTION


def split_solve(
    matrix: np.ndarray, rhs: np.ndarray, tuning: ControllerTuning
) -> tuple[np.ndarray, np.ndarray, float, bool]:
    """
    Solve B U = rhs as two parts that sum to the full solution: one for the
    thrust, roll and pitch demands and one for the yaw demand alone.

    Returns (primary, yaw, cond, regularized). Above ``tuning.cond_max`` the
    damped least-squares solve is used, or IllConditionedAllocation raised
    when regularization is off.
    """
    primary_rhs = np.array([rhs[0], rhs[1], rhs[2], 0.0])
    yaw_rhs = np.array([0.0, 0.0, 0.0, rhs[3]])
    cond = float(np.linalg.cond(matrix))
    if cond <= tuning.cond_max:
        lu = lu_factor(matrix)
        return lu_solve(lu, primary_rhs), lu_solve(lu, yaw_rhs), cond, False
    if not tuning.regularize:
        raise IllConditionedAllocation(cond, tuning.cond_max)
    logger.debug("allocation cond %.3e above %.1e, regularized yaw solve", cond, tuning.cond_max)
    primary = _regularized_solve(matrix, primary_rhs, tuning.cond_max)
    return primary, _regularized_solve(matrix, yaw_rhs, tuning.cond_max), cond, True


def yaw_scale(ct: np.ndarray, primary: np.ndarray, yaw: np.ndarray, dt: float, ct_limit: float) -> float:
    """
    Largest share in [0, 1] of the yaw step that keeps every |C_T| within
    ``ct_limit``, or no further out than the primary step already takes it.
    """
    after = np.asarray(ct, dtype=float) + dt * np.asarray(primary, dtype=float)
    room = np.maximum(ct_limit, np.abs(after))
    step = dt * np.asarray(yaw, dtype=float)
    bounds = np.full(after.shape, np.inf)
    up = step > 0.0
    down = step < 0.0
    bounds[up] = (room[up] - after[up]) / step[up]
    bounds[down] = (room[down] + after[down]) / -step[down]
    return float(np.clip(bounds.min(), 0.0, 1.0))


def control_allocation(
    s: np.ndarray,
    ic: InnerCommand,
    thrust_d: float,
    cs: ControllerState,
    gains: Gains,
    fb: FlipBookkeeping,
    rotor: RotorModel,
    veh: VehicleParams,
    tuning: ControllerTuning,
    dt: float,
) -> Allocation:
    """
    Rate-based allocation: solve B U = (Tdot, ldot, mdot, ndot) for U = d ct/dt.

    Thrust, roll and pitch rows are met exactly; the yaw part is scaled by
    :func:`yaw_scale` against the yaw collective limit.
    """
    rates = s[RATES]
    p, q, r = rates
    wrench = wrench_from_cts(cs.ct, fb.flag, rotor, veh)
    rate_dot = body_angular_acceleration(rates, wrench.moments, veh)

    jerk = (
        desired_body_jerk(s, ic, rate_dot, gains, tuning.eps_sing)
        + gains.allocation_damping * (ic.body_accel - rate_dot)
        + gains.allocation_stiffness * (ic.body_rates - rates)
    )
    pd, qd, rd = rate_dot
    rhs = np.array(
        [
            gains.kp * (thrust_d - wrench.thrust),
            veh.ixx * jerk[0] + (veh.izz - veh.iyy) * (qd * r + q * rd),
            veh.iyy * jerk[1] + (veh.ixx - veh.izz) * (pd * r + p * rd),
            veh.izz * jerk[2] + (veh.iyy - veh.ixx) * (pd * q + p * qd),
        ]
    )

    matrix = allocation_matrix(cs.ct, fb.flag, rotor, veh, tuning.ct_floor)
    primary, yaw, cond, regularized = split_solve(matrix, rhs, tuning)
    scale = yaw_scale(cs.ct, primary, yaw, dt, ct_from_collective(tuning.yaw_collective_limit, rotor))
    if scale < 1.0:
        logger.debug("yaw demand scaled to %.3f of %.4f N m/s", scale, rhs[3])
    return Allocation(
        virtual=primary + scale * yaw,
        rhs=rhs,
        matrix=matrix,
        cond=cond,
        regularized=regularized,
        yaw_scale=scale,
    )


def integrate_virtual(cs: ControllerState, virtual: np.ndarray, dt: float, rotor: RotorModel) -> tuple[np.ndarray, int]:
    """Explicit Euler step of the thrust coefficients, clamped to the collective limit."""
    ct = cs.ct + dt * np.asarray(virtual, dtype=float)
    limit = rotor.ct_max
    over = np.abs(ct) > limit
    clamps = int(over.sum())
    if clamps:
        ct = np.clip(ct, -limit, limit)
        logger.debug("thrust coefficient saturated on %d rotor(s)", clamps)
    return ct, clamps


def rotor_commands(cs: ControllerState, rotor: RotorModel) -> list[RotorCommand]:
    """Operating point of each rotor for the coefficients currently flown."""
    return [command_from_ct(float(c), rotor) for c in cs.ct]


def collectives_from_state(cs: ControllerState, rotor: RotorModel) -> np.ndarray:
    return np.array([cmd.collective for cmd in rotor_commands(cs, rotor)])


def flip_supervisor(
    s: np.ndarray,
    fb: FlipBookkeeping,
    target: float = config.FLIP_TARGET_ROLL,
    tol: float = config.FLIP_LATCH_TOLERANCE,
) -> FlipBookkeeping:
    """Refresh the thrust flag and latch the flip once roll reaches the target."""
    phi = s[3]
    flip = fb.flip
    if not flip and fb.sigma_d == -1 and abs(wrap_angle(phi - target)) < tol:
        flip = 1
        logger.info("flip latched at phi=%.4f rad", phi)
    return FlipBookkeeping(sigma_d=fb.sigma_d, flip=flip, flag=thrust_flag(phi))


@dataclass(frozen=True)
class ControlStep:
    """Everything the controller computed for one step."""

    bookkeeping: FlipBookkeeping
    outer: OuterCommand
    inner: InnerCommand
    allocation: Allocation


class NDIController:
    """
    Wires the supervisor and the three loops for one closed-loop run.

    Usage::

        ctrl = NDIController(rotor, vehicle)
        cs = ctrl.initial_state(s0)
        step = ctrl.step(s, ref_point, cs, dt)   # then integrate with step.allocation.virtual
    """

    def __init__(
        self,
        rotor: RotorModel,
        vehicle: VehicleParams,
        gains: Optional[Gains] = None,
        tuning: Optional[ControllerTuning] = None,
    ):
        self.rotor = rotor
        self.vehicle = vehicle
        self.gains = gains or Gains()
        self.tuning = tuning or ControllerTuning()
        self.bookkeeping = FlipBookkeeping()

    def initial_state(self, s: np.ndarray) -> ControllerState:
        self.bookkeeping = FlipBookkeeping(sigma_d=1, flip=0, flag=thrust_flag(s[3]))
        return initial_controller_state(s, self.rotor, self.vehicle, self.tuning)

    def command_sigma(self, sigma_d: int) -> None:
        """Request upright (+1) or inverted (-1) flight."""
        if sigma_d not in (1, -1):
            raise ValueError(f"sigma_d must be +1 or -1, got {sigma_d!r}")
        if sigma_d != self.bookkeeping.sigma_d:
            logger.info("orientation command sigma_d=%+d", sigma_d)
            self.bookkeeping = FlipBookkeeping(sigma_d=sigma_d, flip=0, flag=self.bookkeeping.flag)

    def step(self, s: np.ndarray, ref: ReferencePoint, cs: ControllerState, dt: float) -> ControlStep:
        fb = flip_supervisor(s, self.bookkeeping, self.tuning.flip_target, self.tuning.flip_tolerance)
        self.bookkeeping = fb
        if cs.mode_key != fb.mode_key:
            cs.reset_filters()
            cs.mode_key = fb.mode_key

        oc = outer_loop(s, ref, self.gains, fb, self.vehicle, self.tuning, cs.last_outer)
        cs.last_outer = oc
        cs.counters["asin_clamps"] += oc.clamped
        cs.counters["held"] += int(oc.held)

        ic = inner_loop(s, oc, self.gains, cs, self.vehicle, self.tuning, dt)
        alloc = control_allocation(s, ic, oc.thrust, cs, self.gains, fb, self.rotor, self.vehicle, self.tuning, dt)
        cs.counters["regularized"] += int(alloc.regularized)
        cs.counters["yaw_limited"] += int(alloc.yaw_scale < 1.0)
        return ControlStep(bookkeeping=fb, outer=oc, inner=ic, allocation=alloc)
