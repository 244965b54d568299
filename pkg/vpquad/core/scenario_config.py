"""
TOML scenario configuration.

Every table is optional and every key falls back to the defaults in
``vpquad.config``; unknown tables or keys are rejected so typos surface.

Example::

    [vehicle]
    mass = 1.34

    [rotor]
    radius = 0.18

    [gains]
    omega_inner = [30.5, 30.5, 20.5]

    [scenario]
    kind = "flip"
    dt = 0.001

    [output]
    path = "out"
    decimation = 10
"""

import logging
import math
import re
import sys
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from vpquad import config
from vpquad.core.errors import ConfigError, ConfigValidationError, ParseError
from vpquad.core.ndi_controller import ControllerTuning, Gains
from vpquad.core.rigid_body import VehicleParams
from vpquad.core.rotor_aero import RotorModel

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

_LOCATION = re.compile(r"line (\d+), column (\d+)")
_LOCATION_SUFFIX = re.compile(r"\s*\(at [^)]*\)$")

Triple = tuple[float, float, float]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class VehicleSection(_Section):
    mass: float = Field(config.VEHICLE_MASS, gt=0)
    ixx: float = Field(config.VEHICLE_IXX, gt=0)
    iyy: float = Field(config.VEHICLE_IYY, gt=0)
    izz: Optional[float] = Field(None, gt=0, description="defaults to ixx + iyy")
    arm: float = Field(config.VEHICLE_ARM, gt=0)
    gravity: float = Field(config.GRAVITY, gt=0)


class RotorSection(_Section):
    radius: float = Field(config.ROTOR_RADIUS, gt=0)
    chord: float = Field(config.ROTOR_CHORD, gt=0)
    blade_count: int = Field(config.ROTOR_BLADE_COUNT, ge=2)
    lift_slope: float = Field(config.ROTOR_LIFT_SLOPE, gt=0)
    zero_lift_drag: float = Field(config.ROTOR_ZERO_LIFT_DRAG, ge=0)
    rot_speed: float = Field(config.ROTOR_SPEED, gt=0)
    air_density: float = Field(config.AIR_DENSITY, gt=0)
    collective_limit: float = Field(config.COLLECTIVE_LIMIT, gt=0, lt=math.pi / 2)


class GainsSection(_Section):
    zeta_outer: Triple = config.ZETA_OUTER
    omega_outer: Triple = config.OMEGA_OUTER
    zeta_inner: Triple = config.ZETA_INNER
    omega_inner: Triple = config.OMEGA_INNER
    zeta_allocation: Triple = config.ZETA_ALLOCATION
    omega_allocation: Triple = config.OMEGA_ALLOCATION
    kp: float = Field(config.THRUST_RATE_GAIN, gt=0)

    @field_validator(
        "zeta_outer", "omega_outer", "zeta_inner", "omega_inner", "zeta_allocation", "omega_allocation"
    )
    @classmethod
    def _positive(cls, value: Triple) -> Triple:
        if not all(v > 0 for v in value):
            raise ValueError("all three values must be positive")
        return value


class ControllerSection(_Section):
    derivative_tau: float = Field(config.DERIVATIVE_FILTER_TAU, gt=0)
    flip_tolerance: float = Field(config.FLIP_LATCH_TOLERANCE, gt=0)
    flip_target: float = config.FLIP_TARGET_ROLL
    ct_floor: float = Field(config.CT_FLOOR, gt=0)
    cond_max: float = Field(config.ALLOCATION_COND_MAX, gt=1)
    min_thrust_fraction: float = Field(config.MIN_THRUST_FRACTION, gt=0, lt=1)
    eps_sing: float = Field(config.SINGULARITY_EPS, gt=0)
    regularize: bool = True
    yaw_collective_limit: float = Field(config.YAW_COLLECTIVE_LIMIT, gt=0, lt=math.pi / 2)
    body_rate_source: Literal["integrated", "command"] = config.BODY_RATE_SOURCE


class ScenarioSection(_Section):
    kind: Literal["stabilization", "tracking", "flip", "inverted_tracking"] = config.DEFAULT_SCENARIO
    duration: Optional[float] = Field(None, gt=0, description="defaults per kind")
    dt: float = Field(config.SIM_DT, gt=0)
    perturbation_deg: Triple = config.PERTURBATION_DEG
    amplitude: float = Field(config.SINUSOID_AMPLITUDE, ge=0)
    omega: float = Field(config.SINUSOID_OMEGA, gt=0)
    flip_time: float = Field(config.FLIP_TIME, ge=0)

    @model_validator(mode="after")
    def _duration_covers_step(self):
        if self.duration is not None and self.duration < self.dt:
            raise ValueError("duration must be at least dt")
        return self


class OutputSection(_Section):
    path: str = config.OUTPUT_DIR
    decimation: int = Field(config.TELEMETRY_DECIMATION, ge=1)


class Config(_Section):
    """Complete scenario configuration."""

    vehicle: VehicleSection = Field(default_factory=VehicleSection)
    rotor: RotorSection = Field(default_factory=RotorSection)
    gains: GainsSection = Field(default_factory=GainsSection)
    controller: ControllerSection = Field(default_factory=ControllerSection)
    scenario: ScenarioSection = Field(default_factory=ScenarioSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @property
    def provenance(self) -> dict[str, str]:
        """``section.field`` -> ``"user"`` or ``"default"``."""
        out = {}
        for section_name in type(self).model_fields:
            section = getattr(self, section_name)
            user_set = section.model_fields_set if section_name in self.model_fields_set else set()
            for name in type(section).model_fields:
                out[f"{section_name}.{name}"] = "user" if name in user_set else "default"
        return out

    def rotor_model(self) -> RotorModel:
        return RotorModel(**self.rotor.model_dump())

    def vehicle_params(self) -> VehicleParams:
        v = self.vehicle
        izz = v.izz if v.izz is not None else v.ixx + v.iyy
        return VehicleParams(mass=v.mass, ixx=v.ixx, iyy=v.iyy, izz=izz, arm=v.arm, gravity=v.gravity)

    def controller_gains(self) -> Gains:
        return Gains(**self.gains.model_dump())

    def controller_tuning(self) -> ControllerTuning:
        return ControllerTuning(**self.controller.model_dump())

    def with_overrides(self, **scenario_fields) -> "Config":
        """Copy with scenario fields replaced (None values ignored), revalidated."""
        updates = {k: v for k, v in scenario_fields.items() if v is not None}
        if not updates:
            return self
        data = self.model_dump(exclude_unset=True)
        data.setdefault("scenario", {}).update(updates)
        return _validate(data)


def _error_location(exc: Exception) -> tuple[Optional[int], Optional[int]]:
    line = getattr(exc, "lineno", None)
    column = getattr(exc, "colno", None)
    if line is None:
        match = _LOCATION.search(str(exc))
        if match:
            line, column = int(match.group(1)), int(match.group(2))
    return line, column


def _validate(data: dict) -> Config:
    try:
        return Config.model_validate(data)
    except ValidationError as e:
        problems = [(".".join(str(p) for p in err["loc"]), err["msg"]) for err in e.errors()]
        raise ConfigValidationError(problems) from e


def parse_config(text: str) -> Config:
    """Parse TOML text into a fully populated :class:`Config`."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        line, column = _error_location(e)
        msg = getattr(e, "msg", None) or _LOCATION_SUFFIX.sub("", str(e))
        raise ParseError(f"invalid TOML: {msg}", line=line, column=column) from e
    cfg = _validate(data)
    user = [k for k, v in cfg.provenance.items() if v == "user"]
    if user:
        logger.debug("config overrides: %s", ", ".join(user))
    return cfg


def load_config(path: Union[str, Path]) -> Config:
    """Read and parse a TOML configuration file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    logger.info("Loaded config %s", path)
    return parse_config(text)
