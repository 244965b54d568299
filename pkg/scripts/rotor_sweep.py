import logging
import math
import sys
from pathlib import Path

import numpy as np
import pandas as pd

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from vpquad.core.rigid_body import VehicleParams, hover_trim
from vpquad.core.rotor_aero import (
    RotorModel,
    cq_from_ct,
    ct_from_collective,
    dimensionalize,
    inflow_ratio,
    thrust_residual,
)

# Logging
logging.basicConfig(level=logging.INFO)

rotor = RotorModel()
veh = VehicleParams()

print(f"sigma={rotor.solidity:.6f}  K={rotor.thrust_gain:.3f} N  ct_max={rotor.ct_max:.6f}")

theta = np.linspace(-rotor.collective_limit, rotor.collective_limit, 15)
ct = ct_from_collective(theta, rotor)
cq = cq_from_ct(ct, rotor)
thrust, torque = dimensionalize(ct, cq, rotor)
sweep = pd.DataFrame(
    {
        "theta0 [deg]": np.degrees(theta),
        "C_T": ct,
        "lambda": inflow_ratio(ct),
        "C_Q": cq,
        "T [N]": thrust,
        "Q [N m]": torque,
        "residual": np.abs(thrust_residual(ct, theta, rotor)),
    }
)
print(sweep.to_string(index=False, float_format=lambda v: f"{v:.6g}"))

trim = hover_trim(rotor, veh)
print(
    f"\nhover: C_T={trim.thrust_coeff:.6f}  theta0={math.degrees(trim.collective):.3f} deg  "
    f"T={trim.rotor_thrust:.4f} N"
)
