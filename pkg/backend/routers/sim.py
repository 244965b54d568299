import math
from typing import Any, Literal, Optional

from fastapi import APIRouter, Depends, HTTPException
from pydantic import BaseModel, Field

from backend.dependencies import get_default_config
from vpquad.core.errors import ConfigError
from vpquad.core.rigid_body import hover_trim
from vpquad.core.rotor_aero import thrust_residual
from vpquad.core.scenario_config import Config, parse_config
from vpquad.core.sim_engine import build_scenario, run_scenario

router = APIRouter()

ScenarioKind = Literal["stabilization", "tracking", "flip", "inverted_tracking"]


class TrimRequest(BaseModel):
    config_toml: Optional[str] = None


class TrimResponse(BaseModel):
    thrust_gain: float  # K [N]
    thrust_coeff: float
    collective_rad: float
    collective_deg: float
    inflow: float
    torque_coeff: float
    rotor_thrust: float  # N
    rotor_torque: float  # N m
    residual: float


class RunRequest(BaseModel):
    kind: ScenarioKind = "stabilization"
    config_toml: Optional[str] = None
    duration: Optional[float] = Field(None, gt=0)
    dt: Optional[float] = Field(None, gt=0)
    decimation: Optional[int] = Field(None, ge=1)
    include_telemetry: bool = False


class RunResponse(BaseModel):
    name: str
    kind: str
    summary: Optional[dict[str, Any]] = None
    telemetry: Optional[list[dict[str, Optional[float]]]] = None
    error: Optional[str] = None


def _resolve_config(config_toml: Optional[str], default: Config) -> Config:
    if not config_toml:
        return default
    try:
        return parse_config(config_toml)
    except ConfigError as e:
        raise HTTPException(status_code=422, detail=str(e))


def _json_safe(value):
    # NaN/inf are not valid JSON
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


@router.post("/trim", response_model=TrimResponse)
def trim(request: TrimRequest, default: Config = Depends(get_default_config)):
    cfg = _resolve_config(request.config_toml, default)
    try:
        rotor, veh = cfg.rotor_model(), cfg.vehicle_params()
        t = hover_trim(rotor, veh)
        return TrimResponse(
            thrust_gain=t.thrust_gain,
            thrust_coeff=t.thrust_coeff,
            collective_rad=t.collective,
            collective_deg=math.degrees(t.collective),
            inflow=t.inflow,
            torque_coeff=t.torque_coeff,
            rotor_thrust=t.rotor_thrust,
            rotor_torque=t.rotor_torque,
            residual=abs(thrust_residual(t.thrust_coeff, t.collective, rotor)),
        )
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))


@router.post("/run", response_model=RunResponse)
def run(request: RunRequest, default: Config = Depends(get_default_config)):
    cfg = _resolve_config(request.config_toml, default)
    try:
        sc = build_scenario(
            request.kind, cfg, duration=request.duration, dt=request.dt, decimation=request.decimation
        )
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))

    try:
        # Simulation aborts come back in-band through result.error
        result = run_scenario(sc)
        telemetry = None
        if request.include_telemetry:
            telemetry = _json_safe(result.decimated.to_dict(orient="records"))
        return RunResponse(
            name=result.name,
            kind=result.kind,
            summary=_json_safe(result.summary.as_dict()) if result.summary else None,
            telemetry=telemetry,
            error=result.error,
        )
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))
