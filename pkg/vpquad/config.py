"""
Configuration module for vpquad.
Centralized defaults for the vehicle, rotor, control gains, controller tuning,
scenarios and output, plus runtime settings read from the environment.
"""

import math
import os

from dotenv import load_dotenv

# Load environment variables (.env in the working directory, if present)
load_dotenv()

# === VEHICLE DEFAULTS ===
VEHICLE_MASS = 1.34  # kg
VEHICLE_IXX = 1e-3  # kg m^2
VEHICLE_IYY = 1e-3  # kg m^2
VEHICLE_IZZ = VEHICLE_IXX + VEHICLE_IYY  # flat-body perpendicular-axis estimate
VEHICLE_ARM = 0.3  # m, rotor axis to CG
GRAVITY = 9.81  # m/s^2

# === ROTOR DEFAULTS ===
ROTOR_RADIUS = 0.18  # m
ROTOR_CHORD = 0.03  # m
ROTOR_BLADE_COUNT = 2
ROTOR_LIFT_SLOPE = 5.23  # 1/rad
ROTOR_ZERO_LIFT_DRAG = 0.01
ROTOR_SPEED = 282.7  # rad/s, regulated
AIR_DENSITY = 1.225  # kg/m^3, sea level standard
COLLECTIVE_LIMIT = 0.35  # rad, swashplate travel

# === CONTROL GAINS ===
ZETA_OUTER = (0.95, 0.95, 0.95)
OMEGA_OUTER = (4.7, 4.7, 4.7)
ZETA_INNER = (0.92, 0.92, 0.92)
OMEGA_INNER = (30.5, 30.5, 20.5)
ZETA_ALLOCATION = (0.91, 0.91, 0.91)
OMEGA_ALLOCATION = (50.0, 50.0, 25.0)
THRUST_RATE_GAIN = 10.0  # 1/s

# === CONTROLLER TUNING ===
DERIVATIVE_FILTER_TAU = 0.02  # s
FLIP_LATCH_TOLERANCE = 0.087  # rad (5 deg)
FLIP_TARGET_ROLL = math.pi
CT_FLOOR = 1e-4  # |C_T| floor inside the yaw row of the allocation matrix
ALLOCATION_COND_MAX = 1e3  # above this the yaw row is solved by damped least squares
YAW_COLLECTIVE_LIMIT = 0.262  # rad (15 deg), collective the yaw channel may drive a rotor to
BODY_RATE_SOURCE = "integrated"  # or "command": desired body rates from the command derivative
MIN_THRUST_FRACTION = 0.05  # of the vehicle weight
SINGULARITY_EPS = 1e-6  # on |cos(theta)|

# === SCENARIO DEFAULTS ===
SCENARIO_KINDS = ("stabilization", "tracking", "flip", "inverted_tracking")
DEFAULT_SCENARIO = "stabilization"
SIM_DT = 1e-3  # s
SCENARIO_DURATIONS = {
    "stabilization": 5.0,
    "tracking": 20.0,
    "flip": 6.0,
    "inverted_tracking": 20.0,
}
PERTURBATION_DEG = (45.0, 30.0, 10.0)  # initial (roll, pitch, yaw)
SINUSOID_AMPLITUDE = 1.0  # m
SINUSOID_OMEGA = math.pi / 2  # rad/s
FLIP_TIME = 0.0  # s, when the inversion is commanded

# === METRICS ===
SETTLING_BAND = 0.05  # fraction of the initial attitude error norm
POSITION_TOLERANCE = 0.05  # m
RMS_WINDOW = 5.0  # s, final window for tracking error

# === OUTPUT ===
TELEMETRY_DECIMATION = 10
CSV_FLOAT_FORMAT = "%.9g"

# === RUNTIME SETTINGS (environment) ===
LOG_LEVEL = os.getenv("VPQUAD_LOG_LEVEL", "INFO").upper()
OUTPUT_DIR = os.getenv("VPQUAD_OUTPUT_DIR", "out")
CORS_ORIGINS = [o.strip() for o in os.getenv("VPQUAD_CORS_ORIGINS", "*").split(",") if o.strip()]

# App version
APP_VERSION = "0.3.0"
