"""Exception hierarchy shared by the model, controller, runner and config layers."""

from typing import Optional


class VpquadError(Exception):
    """Base class for every error raised by vpquad."""


class SimulationError(VpquadError):
    """A numerical failure that stops a closed-loop run."""


class SingularAttitude(SimulationError):
    """Pitch too close to +-90 deg for the Euler-angle transforms."""

    def __init__(self, theta: float, cos_theta: float):
        super().__init__(
            f"singular attitude: theta={theta:.6f} rad (|cos theta|={abs(cos_theta):.2e})"
        )
        self.theta = theta


class NonFinite(SimulationError):
    """State or controller values are no longer finite (diverged run)."""


class DegenerateThrust(SimulationError):
    """Commanded thrust too small to define a thrust direction."""


class IllConditionedAllocation(SimulationError):
    """Allocation matrix too ill-conditioned to invert."""

    def __init__(self, cond: float, limit: float):
        super().__init__(f"allocation matrix ill-conditioned: cond={cond:.3e} > {limit:.1e}")
        self.cond = cond


class ConfigError(VpquadError):
    """Scenario configuration could not be used."""


class ParseError(ConfigError):
    """Configuration text is not valid TOML."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class ConfigValidationError(ConfigError):
    """Configuration values violate a documented invariant."""

    def __init__(self, problems: list[tuple[str, str]]):
        self.problems = problems
        self.fields = [name for name, _ in problems]
        detail = "; ".join(f"{name}: {msg}" for name, msg in problems)
        super().__init__(f"invalid configuration: {detail}")
