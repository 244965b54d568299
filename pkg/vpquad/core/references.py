"""Reference trajectories for the outer loop (inertial frame, z down)."""

from dataclasses import dataclass

import numpy as np

from vpquad import config


@dataclass(frozen=True)
class ReferencePoint:
    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    psi: float = 0.0


@dataclass(frozen=True)
class HoverReference:
    """Hold a fixed point and heading."""

    position: tuple[float, float, float] = (0.0, 0.0, 0.0)
    psi: float = 0.0

    def __call__(self, t: float) -> ReferencePoint:
        return ReferencePoint(
            position=np.array(self.position, dtype=float),
            velocity=np.zeros(3),
            acceleration=np.zeros(3),
            psi=self.psi,
        )


@dataclass(frozen=True)
class SinusoidReference:
    """
    A sin(omega t) about ``center`` on the selected axes, with analytic
    velocity and acceleration feed-forward.
    """

    amplitude: float = config.SINUSOID_AMPLITUDE
    omega: float = config.SINUSOID_OMEGA
    axes: tuple[bool, bool, bool] = (True, True, True)
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    psi: float = 0.0

    def __call__(self, t: float) -> ReferencePoint:
        mask = np.array(self.axes, dtype=float)
        wt = self.omega * t
        a = self.amplitude
        return ReferencePoint(
            position=np.array(self.center, dtype=float) + mask * a * np.sin(wt),
            velocity=mask * a * self.omega * np.cos(wt),
            acceleration=-mask * a * self.omega**2 * np.sin(wt),
            psi=self.psi,
        )
