import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from vpquad.core.ndi_controller import allocation_matrix
from vpquad.core.rigid_body import VehicleParams, hover_trim
from vpquad.core.rotor_aero import RotorModel

rotor = RotorModel()
veh = VehicleParams()
ct_hover = hover_trim(rotor, veh).thrust_coeff

np.set_printoptions(precision=4, suppress=True, linewidth=120)

# Conditioning of the allocation matrix as total thrust passes through zero (mid-flip)
for scale in (1.0, 0.5, 0.1, 0.01, 0.0, -0.01, -0.1, -1.0):
    ct = np.full(4, scale * ct_hover)
    for flag in (-1.0, 1.0):
        B = allocation_matrix(ct, flag, rotor, veh)
        print(f"ct={ct[0]:+.6f} flag={flag:+.0f}  cond={np.linalg.cond(B):.3e}")

print("\nhover matrix:")
print(allocation_matrix(np.full(4, ct_hover), -1.0, rotor, veh))
