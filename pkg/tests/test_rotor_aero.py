"""Tests for the blade-element / momentum rotor model."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from vpquad.core.rotor_aero import (
    RotorCommand,
    RotorModel,
    collective_from_ct,
    command_from_collective,
    command_from_ct,
    cq_from_ct,
    ct_from_collective,
    dimensionalize,
    inflow_ratio,
    thrust_residual,
)

HOVER_CT = 0.010178


def test_derived_properties(rotor):
    """Solidity, thrust gain and ct_max follow from the blade geometry."""
    assert rotor.solidity == pytest.approx(0.106103, abs=1e-6)
    assert rotor.thrust_gain == pytest.approx(322.87, rel=1e-4)
    assert rotor.torque_gain == pytest.approx(322.87 * 0.18, rel=1e-4)
    assert rotor.ct_max == pytest.approx(ct_from_collective(0.35, rotor))
    assert 0.018 < rotor.ct_max < 0.02


@pytest.mark.parametrize(
    ("field", "value"),
    [("radius", 0.0), ("chord", -0.01), ("blade_count", 1), ("zero_lift_drag", -0.1), ("collective_limit", 0.0)],
)
def test_invalid_rotor_names_field(field, value):
    """Construction rejects out-of-range parameters and names the field."""
    with pytest.raises(ValueError, match=field):
        RotorModel(**{field: value})


def test_inflow_ratio_examples():
    assert inflow_ratio(0.0) == 0.0
    assert inflow_ratio(0.02) == pytest.approx(0.1, abs=1e-12)
    assert inflow_ratio(HOVER_CT) == pytest.approx(0.071337, abs=1e-6)
    assert inflow_ratio(-0.02) == pytest.approx(-0.1, abs=1e-12)


def test_collective_from_ct_examples(rotor):
    """Hover thrust coefficient needs about 12.44 deg of collective."""
    assert collective_from_ct(0.0, rotor) == 0.0
    theta = collective_from_ct(HOVER_CT, rotor)
    assert theta == pytest.approx(0.2171, abs=2e-4)
    assert math.degrees(theta) == pytest.approx(12.44, abs=0.02)
    assert collective_from_ct(-HOVER_CT, rotor) == -theta


def test_ct_from_collective_examples(rotor):
    assert ct_from_collective(0.0, rotor) == 0.0
    assert ct_from_collective(0.2171, rotor) == pytest.approx(HOVER_CT, rel=2e-3)
    assert abs(thrust_residual(ct_from_collective(0.1, rotor), 0.1, rotor)) < 1e-12


def test_round_trip_and_residual(rotor):
    """Collective -> ct -> collective is the identity over the full travel."""
    theta = np.linspace(-0.35, 0.35, 701)
    ct = ct_from_collective(theta, rotor)
    np.testing.assert_allclose(collective_from_ct(ct, rotor), theta, atol=1e-10)
    assert np.max(np.abs(thrust_residual(ct, theta, rotor))) < 1e-12


def test_monotone_and_odd(rotor):
    theta = np.linspace(-0.35, 0.35, 1001)
    ct = ct_from_collective(theta, rotor)
    assert np.all(np.diff(ct) > 0)
    np.testing.assert_array_equal(ct_from_collective(-theta, rotor), -ct)
    cts = np.linspace(-0.02, 0.02, 401)
    np.testing.assert_array_equal(collective_from_ct(-cts, rotor), -collective_from_ct(cts, rotor))


def test_closed_form_matches_bisection(rotor):
    """The quadratic root agrees with a bracketing solve of the thrust equation."""
    thetas = np.linspace(1e-4, 0.35, 1000)
    closed = ct_from_collective(thetas, rotor)
    for theta, ct in zip(thetas, closed):
        root = brentq(lambda c: thrust_residual(c, theta, rotor), 0.0, 0.05, xtol=1e-15)
        assert abs(root - ct) < 1e-10


def test_torque_coefficient(rotor):
    """Profile drag sets the floor; hover torque is about 0.05 N m."""
    floor = rotor.solidity * rotor.zero_lift_drag / 8.0
    assert cq_from_ct(0.0, rotor) == pytest.approx(1.326e-4, rel=1e-3)
    assert cq_from_ct(0.0, rotor) == pytest.approx(floor)
    assert cq_from_ct(HOVER_CT, rotor) == pytest.approx(8.59e-4, rel=2e-3)
    assert cq_from_ct(-HOVER_CT, rotor) == cq_from_ct(HOVER_CT, rotor)
    cts = np.linspace(0.001, 0.02, 50)
    assert np.all(cq_from_ct(cts, rotor) > floor)
    assert np.all(cq_from_ct(-cts, rotor) > floor)


def test_dimensionalize(rotor):
    assert dimensionalize(0.0, 0.0, rotor) == (0.0, 0.0)
    thrust, torque = dimensionalize(HOVER_CT, 8.59e-4, rotor)
    assert thrust == pytest.approx(3.286, abs=2e-3)
    assert torque == pytest.approx(0.0499, abs=2e-4)


def test_scalar_in_scalar_out(rotor):
    assert isinstance(ct_from_collective(0.1, rotor), float)
    assert isinstance(inflow_ratio(0.01), float)
    assert ct_from_collective(np.array([0.1, 0.2]), rotor).shape == (2,)


def test_command_from_collective_clamps(rotor):
    """Collective beyond the swashplate travel is clamped and flagged."""
    cmd = command_from_collective(0.5, rotor)
    assert isinstance(cmd, RotorCommand)
    assert cmd.clamped
    assert cmd.collective == pytest.approx(0.35)
    assert cmd.thrust_coeff == pytest.approx(rotor.ct_max)

    neg = command_from_collective(-0.5, rotor)
    assert neg.collective == pytest.approx(-0.35)
    assert neg.thrust_coeff < 0

    ok = command_from_collective(0.2, rotor)
    assert not ok.clamped
    assert ok.torque_coeff >= rotor.solidity * rotor.zero_lift_drag / 8.0


def test_command_from_ct(rotor):
    cmd = command_from_ct(HOVER_CT, rotor)
    assert cmd.thrust_coeff == pytest.approx(HOVER_CT, rel=1e-10)
    assert cmd.inflow == pytest.approx(inflow_ratio(HOVER_CT))
    assert not cmd.clamped


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
