"""
Closed-loop scenario runner.

Builds the four standard scenarios, steps plant and controller at a single
fixed rate (RK4 on the rigid body with the thrust coefficients held over the
step, explicit Euler on the coefficients), records telemetry into a pandas
DataFrame and reduces it to summary metrics.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Optional

import numpy as np
import pandas as pd

from vpquad import config
from vpquad.core.errors import NonFinite, SimulationError
from vpquad.core.ndi_controller import (
    ControllerState,
    ControllerTuning,
    Gains,
    NDIController,
    collectives_from_state,
    integrate_virtual,
    wrap_angle,
)
from vpquad.core.references import HoverReference, ReferencePoint, SinusoidReference
from vpquad.core.rigid_body import (
    VehicleParams,
    make_state,
    state_derivative,
    thrust_flag,
    wrench_from_cts,
)
from vpquad.core.rotor_aero import RotorModel
from vpquad.core.scenario_config import Config

logger = logging.getLogger(__name__)

STATE_COLUMNS = (
    "x [m]", "y [m]", "z [m]",
    "phi [rad]", "theta [rad]", "psi [rad]",
    "u [m/s]", "v [m/s]", "w [m/s]",
    "p [rad/s]", "q [rad/s]", "r [rad/s]",
)  # fmt: skip
POSITION_COLUMNS = STATE_COLUMNS[0:3]
REFERENCE_COLUMNS = ("x_ref [m]", "y_ref [m]", "z_ref [m]")
CT_COLUMNS = tuple(f"ct{i} [-]" for i in range(1, 5))
COLLECTIVE_COLUMNS = tuple(f"theta0_{i} [rad]" for i in range(1, 5))
COLLECTIVE_DEG_COLUMNS = tuple(f"theta0_{i} [deg]" for i in range(1, 5))
ATTITUDE_COMMAND_COLUMNS = ("phi_d [rad]", "theta_d [rad]", "psi_d [rad]")

TELEMETRY_COLUMNS = (
    ("t [s]",)
    + STATE_COLUMNS
    + ("altitude [m]", "phi [deg]", "theta [deg]", "psi [deg]")
    + REFERENCE_COLUMNS
    + CT_COLUMNS
    + COLLECTIVE_COLUMNS
    + COLLECTIVE_DEG_COLUMNS
    + ("T_d [N]",)
    + ATTITUDE_COMMAND_COLUMNS
    + ("T [N]", "l [N m]", "m [N m]", "n [N m]")
    + ("flip [-]", "flag [-]", "sigma_d [-]", "cond_B [-]")
    + ("saturations [-]", "asin_clamps [-]", "regularized [-]", "yaw_limited [-]")
)

Reference = Callable[[float], ReferencePoint]


@dataclass(frozen=True)
class Scenario:
    """One closed-loop run: plant, controller settings, reference and timing."""

    name: str
    kind: str
    initial_state: np.ndarray
    reference: Reference
    duration: float
    dt: float = config.SIM_DT
    flip_time: Optional[float] = None
    gains: Gains = field(default_factory=Gains)
    tuning: ControllerTuning = field(default_factory=ControllerTuning)
    rotor: RotorModel = field(default_factory=RotorModel)
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    decimation: int = config.TELEMETRY_DECIMATION

    def __post_init__(self):
        if self.kind not in config.SCENARIO_KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}; expected one of {config.SCENARIO_KINDS}")
        if not self.dt > 0:
            raise ValueError(f"Scenario.dt must be positive: {self.dt!r}")
        if not self.duration >= self.dt:
            raise ValueError(f"Scenario.duration must be at least dt: {self.duration!r}")
        if self.decimation < 1:
            raise ValueError(f"Scenario.decimation must be >= 1: {self.decimation!r}")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


@dataclass
class SummaryMetrics:
    settling_time: Optional[float]  # s, attitude error inside the band for good
    recovery_time: Optional[float]  # s, position error inside tolerance for good
    max_collective_deg: float
    flip_latch_time: Optional[float]  # s after the flip command
    flip_lateral_displacement: Optional[float]  # m, command to latch
    flip_vertical_displacement: Optional[float]  # m, command to latch
    rms_tracking_error: float  # m, final window
    final_altitude_error: float  # m
    final_collectives_deg: tuple[float, float, float, float]
    final_ct_spread: float
    counters: dict[str, int] = field(default_factory=dict)
    simulated_time: float = 0.0
    wall_time: float = 0.0

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class ScenarioResult:
    """Container for a scenario run."""

    name: str
    kind: str
    telemetry: pd.DataFrame  # every step
    decimated: pd.DataFrame  # every `decimation`-th step
    summary: Optional[SummaryMetrics] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class RunComparison:
    matched: int  # timestamps present in both runs
    max_abs: float
    max_rel: float
    worst_column: Optional[str]


def rk4_step(
    s: np.ndarray,
    cs: ControllerState,
    virtual: np.ndarray,
    dt: float,
    rotor: RotorModel,
    veh: VehicleParams,
    eps_sing: float = config.SINGULARITY_EPS,
) -> tuple[np.ndarray, ControllerState, int]:
    """
    Advance the plant one step with the thrust coefficients held, then the
    coefficients with the virtual control. The thrust flag follows the roll
    angle inside every stage.
    """
    ct = cs.ct

    def deriv(x: np.ndarray) -> np.ndarray:
        return state_derivative(x, wrench_from_cts(ct, thrust_flag(x[3]), rotor, veh), veh, eps_sing)

    k1 = deriv(s)
    k2 = deriv(s + 0.5 * dt * k1)
    k3 = deriv(s + 0.5 * dt * k2)
    k4 = deriv(s + dt * k3)
    s_next = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    ct_next, clamps = integrate_virtual(cs, virtual, dt, rotor)
    if not (np.all(np.isfinite(s_next)) and np.all(np.isfinite(ct_next))):
        raise NonFinite("state or thrust coefficients became non-finite")
    cs.ct = ct_next
    cs.counters["saturations"] += clamps
    return s_next, cs, clamps


def build_scenario(
    kind: str,
    cfg: Optional[Config] = None,
    *,
    duration: Optional[float] = None,
    dt: Optional[float] = None,
    decimation: Optional[int] = None,
) -> Scenario:
    """
    Standard scenario of the given kind.

    ``cfg`` is a :class:`vpquad.core.scenario_config.Config` (defaults when
    omitted); keyword overrides win over the config. Upright tracking
    starts on the reference (position and velocity at t=0); the other
    kinds start at rest.
    """
    cfg = cfg if cfg is not None else Config()
    sc_cfg = cfg.scenario
    if kind not in config.SCENARIO_KINDS:
        raise ValueError(f"unknown scenario kind {kind!r}; expected one of {config.SCENARIO_KINDS}")

    s0 = make_state()
    if kind == "stabilization":
        phi, theta, psi = (math.radians(a) for a in sc_cfg.perturbation_deg)
        s0 = make_state(phi=phi, theta=theta, psi=psi)

    if kind in ("tracking", "inverted_tracking"):
        reference: Reference = SinusoidReference(amplitude=sc_cfg.amplitude, omega=sc_cfg.omega)
    else:
        reference = HoverReference()

    if kind == "tracking":
        # level attitude, so body and inertial velocities coincide
        start = reference(0.0)
        x, y, z = start.position
        u, v, w = start.velocity
        s0 = make_state(x=x, y=y, z=z, u=u, v=v, w=w)

    flip_time = sc_cfg.flip_time if kind in ("flip", "inverted_tracking") else None
    if duration is None:
        duration = sc_cfg.duration if sc_cfg.duration is not None else config.SCENARIO_DURATIONS[kind]

    return Scenario(
        name=kind,
        kind=kind,
        initial_state=s0,
        reference=reference,
        duration=duration,
        dt=dt if dt is not None else sc_cfg.dt,
        flip_time=flip_time,
        gains=cfg.controller_gains(),
        tuning=cfg.controller_tuning(),
        rotor=cfg.rotor_model(),
        vehicle=cfg.vehicle_params(),
        decimation=decimation if decimation is not None else cfg.output.decimation,
    )


def _empty_telemetry() -> pd.DataFrame:
    return pd.DataFrame(columns=list(TELEMETRY_COLUMNS), dtype=float)


def run_scenario(sc: Scenario, progress_callback=None) -> ScenarioResult:
    """
    Run a scenario to completion.

    A SimulationError stops the run; the result then carries the error text
    and the telemetry logged up to the failure.

    Args:
        sc: Scenario to run
        progress_callback: Optional callback(message) for progress updates
    """

    def log(msg):
        logger.debug(msg)
        if progress_callback:
            progress_callback(msg)

    log(f"Running {sc.name} ({sc.duration:.2f} s at dt={sc.dt:g} s)...")
    started = time.perf_counter()

    ctrl = NDIController(sc.rotor, sc.vehicle, sc.gains, sc.tuning)
    s = np.array(sc.initial_state, dtype=float)
    cs = ctrl.initial_state(s)
    n_steps = sc.n_steps
    rows = np.empty((n_steps + 1, len(TELEMETRY_COLUMNS)))
    recorded = 0
    flip_commanded = False
    error = None
    report_every = max(1, n_steps // 10)

    for k in range(n_steps + 1):
        t = k * sc.dt
        try:
            if sc.flip_time is not None and not flip_commanded and t >= sc.flip_time - 1e-12:
                ctrl.command_sigma(-1)
                flip_commanded = True
            ref = sc.reference(t)
            step = ctrl.step(s, ref, cs, sc.dt)
            rows[k] = _telemetry_row(t, s, ref, cs, step, sc)
            recorded = k + 1
            if k == n_steps:
                break
            s, cs, _ = rk4_step(s, cs, step.allocation.virtual, sc.dt, sc.rotor, sc.vehicle, sc.tuning.eps_sing)
        except SimulationError as e:
            error = f"{type(e).__name__} at t={t:.4f} s: {e}"
            logger.warning("%s aborted: %s", sc.name, error)
            log(f"Aborted: {error}")
            break
        if k and k % report_every == 0:
            log(f"{sc.name}: t={t:.2f} s")

    wall = time.perf_counter() - started
    telemetry = pd.DataFrame(rows[:recorded], columns=list(TELEMETRY_COLUMNS)) if recorded else _empty_telemetry()
    decimated = telemetry.iloc[:: sc.decimation].reset_index(drop=True)
    summary = summarize(telemetry, sc, wall_time=wall) if recorded else None

    if summary is not None:
        logger.info(
            "%s: %.2f s simulated in %.2f s wall, saturations=%d asin_clamps=%d regularized=%d yaw_limited=%d",
            sc.name,
            summary.simulated_time,
            wall,
            summary.counters.get("saturations", 0),
            summary.counters.get("asin_clamps", 0),
            summary.counters.get("regularized", 0),
            summary.counters.get("yaw_limited", 0),
        )
    log("Done!" if error is None else "Stopped.")
    return ScenarioResult(
        name=sc.name, kind=sc.kind, telemetry=telemetry, decimated=decimated, summary=summary, error=error
    )


def _telemetry_row(t, s, ref: ReferencePoint, cs: ControllerState, step, sc: Scenario) -> np.ndarray:
    fb = step.bookkeeping
    oc = step.outer
    theta0 = collectives_from_state(cs, sc.rotor)
    wrench = wrench_from_cts(cs.ct, fb.flag, sc.rotor, sc.vehicle)
    return np.concatenate(
        [
            [t],
            s,
            [-s[2]],
            np.degrees(s[3:6]),
            ref.position,
            cs.ct,
            theta0,
            np.degrees(theta0),
            [oc.thrust, oc.phi, oc.theta, oc.psi],
            [wrench.thrust, wrench.roll, wrench.pitch, wrench.yaw],
            [fb.flip, fb.flag, fb.sigma_d, step.allocation.cond],
            [
                cs.counters["saturations"],
                cs.counters["asin_clamps"],
                cs.counters["regularized"],
                cs.counters["yaw_limited"],
            ],
        ]
    )


def _last_exceedance(t: np.ndarray, values: np.ndarray, limit: float) -> float:
    # first time after which values stay within limit
    over = np.flatnonzero(values > limit)
    if over.size == 0:
        return 0.0
    last = over[-1]
    return float(t[last + 1]) if last + 1 < t.size else float(t[-1])


def summarize(telemetry: pd.DataFrame, scenario: Scenario, wall_time: float = 0.0) -> SummaryMetrics:
    """Reduce a telemetry frame to the scenario's scalar metrics."""
    t = telemetry["t [s]"].to_numpy()
    pos = telemetry[list(POSITION_COLUMNS)].to_numpy()
    ref = telemetry[list(REFERENCE_COLUMNS)].to_numpy()
    pos_err = np.linalg.norm(pos - ref, axis=1)

    attitude = telemetry[["phi [rad]", "theta [rad]", "psi [rad]"]].to_numpy()
    commanded = telemetry[list(ATTITUDE_COMMAND_COLUMNS)].to_numpy()
    att_err = np.linalg.norm(wrap_angle(commanded - attitude), axis=1)
    settling = None
    if att_err[0] > 1e-9:
        settling = _last_exceedance(t, att_err, config.SETTLING_BAND * att_err[0])

    flip_latch = flip_lateral = flip_vertical = None
    if scenario.flip_time is not None:
        latched = np.flatnonzero(telemetry["flip [-]"].to_numpy() > 0.5)
        start = int(np.searchsorted(t, scenario.flip_time - 1e-12))
        if latched.size and start < t.size:
            end = latched[0]
            flip_latch = float(t[end] - t[start])
            window = pos[start : end + 1] - pos[start]
            flip_lateral = float(np.max(np.hypot(window[:, 0], window[:, 1])))
            flip_vertical = float(np.max(np.abs(window[:, 2])))

    tail = t >= t[-1] - config.RMS_WINDOW
    rms = float(np.sqrt(np.mean(pos_err[tail] ** 2)))
    final_ct = telemetry[list(CT_COLUMNS)].to_numpy()[-1]
    final = telemetry.iloc[-1]

    return SummaryMetrics(
        settling_time=settling,
        recovery_time=_last_exceedance(t, pos_err, config.POSITION_TOLERANCE),
        max_collective_deg=float(np.max(np.abs(telemetry[list(COLLECTIVE_DEG_COLUMNS)].to_numpy()))),
        flip_latch_time=flip_latch,
        flip_lateral_displacement=flip_lateral,
        flip_vertical_displacement=flip_vertical,
        rms_tracking_error=rms,
        final_altitude_error=float(abs(final["z [m]"] - final["z_ref [m]"])),
        final_collectives_deg=tuple(float(v) for v in final[list(COLLECTIVE_DEG_COLUMNS)]),
        final_ct_spread=float(final_ct.max() - final_ct.min()),
        counters={
            "saturations": int(final["saturations [-]"]),
            "asin_clamps": int(final["asin_clamps [-]"]),
            "regularized": int(final["regularized [-]"]),
            "yaw_limited": int(final["yaw_limited [-]"]),
        },
        simulated_time=float(t[-1]),
        wall_time=wall_time,
    )


def run_scenarios(scenarios: list[Scenario], max_workers: Optional[int] = None) -> list[ScenarioResult]:
    """Run independent scenarios, in worker processes when more than one worker is allowed."""
    if max_workers == 1 or len(scenarios) <= 1:
        return [run_scenario(sc) for sc in scenarios]
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(run_scenario, scenarios))


def compare_runs(a: pd.DataFrame, b: pd.DataFrame, columns=STATE_COLUMNS) -> RunComparison:
    """Largest state difference between two runs at the timestamps they share."""
    ka = a.assign(_key=np.round(a["t [s]"].to_numpy(), 9))
    kb = b.assign(_key=np.round(b["t [s]"].to_numpy(), 9))
    merged = ka.merge(kb, on="_key", suffixes=("_a", "_b"))
    if merged.empty:
        return RunComparison(matched=0, max_abs=math.nan, max_rel=math.nan, worst_column=None)

    max_abs = max_rel = 0.0
    worst = None
    for col in columns:
        va = merged[f"{col}_a"].to_numpy()
        vb = merged[f"{col}_b"].to_numpy()
        diff = np.abs(va - vb)
        scale = np.maximum(np.maximum(np.abs(va), np.abs(vb)), 1e-12)
        col_abs = float(diff.max())
        max_rel = max(max_rel, float((diff / scale).max()))
        if worst is None or col_abs > max_abs:
            max_abs, worst = col_abs, col
    return RunComparison(matched=len(merged), max_abs=max_abs, max_rel=max_rel, worst_column=worst)
