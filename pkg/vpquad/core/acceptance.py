"""
Acceptance checks: hover trim plus the four closed-loop scenarios.
"""

import logging
import math
import operator
from dataclasses import dataclass
from typing import Optional

import pandas as pd

from vpquad import config
from vpquad.core.rigid_body import HoverTrim, VehicleParams, hover_trim
from vpquad.core.rotor_aero import RotorModel, thrust_residual
from vpquad.core.scenario_config import Config
from vpquad.core.sim_engine import ScenarioResult, build_scenario, run_scenarios

logger = logging.getLogger(__name__)

# === THRESHOLDS ===
MAX_COLLECTIVE_DEG = 16.0
TRIM_RESIDUAL = 1e-6
TRIM_THRUST_TOL = 1e-9  # N
SETTLING_LIMIT = 1.0  # s
RECOVERY_LIMIT = 1.5  # s
TRACKING_RMS = 0.05  # m
FLIP_LATCH_LIMIT = 1.5  # s
FLIP_LATERAL_LIMIT = 3 * 0.14  # m
FLIP_VERTICAL_LIMIT = 3 * 0.07  # m
FLIP_ALTITUDE_DRIFT = 0.1  # m
INVERTED_TRACKING_RMS = 0.1  # m

_OPS = {"<": operator.lt, "<=": operator.le}


@dataclass(frozen=True)
class CriterionResult:
    name: str
    value: Optional[float]
    threshold: float
    comparison: str = "<"
    passed: bool = False


def _check(name: str, value: Optional[float], threshold: float, comparison: str = "<") -> CriterionResult:
    passed = value is not None and math.isfinite(value) and _OPS[comparison](value, threshold)
    return CriterionResult(name=name, value=value, threshold=threshold, comparison=comparison, passed=passed)


def _completed(result: ScenarioResult) -> CriterionResult:
    return CriterionResult(
        name=f"{result.kind}: completed",
        value=0.0 if result.ok else 1.0,
        threshold=1.0,
        passed=result.ok,
    )


def evaluate_trim(trim: HoverTrim, rotor: RotorModel, veh: VehicleParams) -> list[CriterionResult]:
    return [
        _check("trim: rotor thrust error [N]", abs(trim.rotor_thrust - veh.weight / 4.0), TRIM_THRUST_TOL),
        _check("trim: collective [deg]", math.degrees(trim.collective), MAX_COLLECTIVE_DEG),
        _check("trim: thrust residual", abs(thrust_residual(trim.thrust_coeff, trim.collective, rotor)), TRIM_RESIDUAL),
    ]


def evaluate_acceptance(
    results: dict[str, ScenarioResult], trim: HoverTrim, rotor: RotorModel, veh: VehicleParams
) -> list[CriterionResult]:
    """Criteria for whichever standard scenarios are present in ``results``."""
    criteria = evaluate_trim(trim, rotor, veh)

    for kind in config.SCENARIO_KINDS:
        result = results.get(kind)
        if result is None:
            continue
        criteria.append(_completed(result))
        m = result.summary
        if m is None:
            continue
        if kind == "stabilization":
            criteria += [
                _check("stabilization: settling time [s]", m.settling_time, SETTLING_LIMIT),
                _check("stabilization: position recovery [s]", m.recovery_time, RECOVERY_LIMIT),
                _check("stabilization: max collective [deg]", m.max_collective_deg, MAX_COLLECTIVE_DEG),
            ]
        elif kind == "tracking":
            criteria.append(_check("tracking: RMS error final window [m]", m.rms_tracking_error, TRACKING_RMS))
        elif kind == "flip":
            criteria += [
                _check("flip: latch time [s]", m.flip_latch_time, FLIP_LATCH_LIMIT),
                _check("flip: lateral displacement [m]", m.flip_lateral_displacement, FLIP_LATERAL_LIMIT, "<="),
                _check("flip: vertical displacement [m]", m.flip_vertical_displacement, FLIP_VERTICAL_LIMIT, "<="),
                _check("flip: final altitude error [m]", m.final_altitude_error, FLIP_ALTITUDE_DRIFT),
                _check("flip: max final collective [deg]", max(m.final_collectives_deg), 0.0),
            ]
        elif kind == "inverted_tracking":
            criteria += [
                _check(
                    "inverted_tracking: RMS error final window [m]", m.rms_tracking_error, INVERTED_TRACKING_RMS
                ),
                _check("inverted_tracking: max final collective [deg]", max(m.final_collectives_deg), 0.0),
            ]
    return criteria


def acceptance_table(criteria: list[CriterionResult]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "criterion": [c.name for c in criteria],
            "value": [c.value for c in criteria],
            "limit": [f"{c.comparison} {c.threshold:g}" for c in criteria],
            "result": ["PASS" if c.passed else "FAIL" for c in criteria],
        }
    )


def run_acceptance(
    cfg: Optional[Config] = None, max_workers: Optional[int] = None, **overrides
) -> tuple[list[CriterionResult], dict[str, ScenarioResult]]:
    """Run all four scenarios and evaluate every criterion."""
    cfg = cfg if cfg is not None else Config()
    rotor, veh = cfg.rotor_model(), cfg.vehicle_params()
    scenarios = [build_scenario(kind, cfg, **overrides) for kind in config.SCENARIO_KINDS]
    results = {r.kind: r for r in run_scenarios(scenarios, max_workers=max_workers)}
    criteria = evaluate_acceptance(results, hover_trim(rotor, veh), rotor, veh)
    failed = [c.name for c in criteria if not c.passed]
    if failed:
        logger.warning("acceptance failed: %s", "; ".join(failed))
    else:
        logger.info("acceptance passed (%d criteria)", len(criteria))
    return criteria, results
