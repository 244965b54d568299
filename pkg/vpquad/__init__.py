"""Variable-pitch quadrotor flight dynamics and control."""

from vpquad.config import APP_VERSION

__version__ = APP_VERSION
