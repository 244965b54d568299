"""Tests for the 6-DOF rigid-body model."""

import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from vpquad.core.errors import SingularAttitude
from vpquad.core.rigid_body import (
    EULER,
    POS,
    RATES,
    STATE_FIELDS,
    VEL,
    VehicleParams,
    Wrench,
    body_angular_acceleration,
    body_rates_from_euler_rates,
    euler_rate_matrix,
    euler_rates,
    euler_to_body_matrix,
    euler_to_body_matrix_accel,
    euler_to_body_matrix_rate,
    inertial_acceleration,
    make_state,
    rotation_body_to_inertial,
    state_derivative,
    thrust_flag,
    wrench_from_cts,
)


def _random_states(n, seed=7):
    rng = np.random.default_rng(seed)
    s = rng.uniform(-2.0, 2.0, size=(n, 12))
    s[:, 3] = rng.uniform(-math.pi, math.pi, n)
    s[:, 4] = rng.uniform(-1.4, 1.4, n)
    s[:, 5] = rng.uniform(-math.pi, math.pi, n)
    return s


def test_vehicle_defaults():
    veh = VehicleParams()
    assert veh.izz == pytest.approx(veh.ixx + veh.iyy)
    assert veh.weight == pytest.approx(1.34 * 9.81)
    with pytest.raises(ValueError, match="mass"):
        VehicleParams(mass=0.0)


def test_make_state_layout():
    s = make_state(phi=0.1, w=2.0, r=-1.0)
    assert s.shape == (12,)
    assert s[EULER][0] == 0.1
    assert s[VEL][2] == 2.0
    assert s[RATES][2] == -1.0
    assert len(STATE_FIELDS) == 12
    with pytest.raises(KeyError):
        make_state(alpha=1.0)


def test_rotation_examples():
    np.testing.assert_allclose(rotation_body_to_inertial(0, 0, 0), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(rotation_body_to_inertial(math.pi, 0, 0), np.diag([1.0, -1.0, -1.0]), atol=1e-15)


def test_rotation_orthonormal_and_matches_scipy():
    """Explicit Z-Y-X matrix equals scipy's intrinsic zyx composition."""
    for s in _random_states(200):
        phi, theta, psi = s[EULER]
        rot = rotation_body_to_inertial(phi, theta, psi)
        np.testing.assert_allclose(rot @ rot.T, np.eye(3), atol=1e-14)
        assert np.linalg.det(rot) == pytest.approx(1.0, abs=1e-14)
        ref = Rotation.from_euler("ZYX", [psi, theta, phi]).as_matrix()
        np.testing.assert_allclose(rot, ref, atol=1e-12)


def test_euler_rates_examples():
    np.testing.assert_allclose(euler_rates(0.5, 0, 0, 0.0, 0.0), [0.5, 0, 0], atol=1e-15)
    np.testing.assert_allclose(euler_rates(0, 1, 0, math.pi, 0.0), [0, -1, 0], atol=1e-15)


def test_euler_rates_singular():
    with pytest.raises(SingularAttitude) as exc:
        euler_rates(0, 0, 0, 0.0, math.pi / 2)
    assert exc.value.theta == pytest.approx(math.pi / 2)


def test_euler_rate_inverse_identity():
    """Body->Euler and Euler->body rate maps are inverses."""
    for s in _random_states(500):
        phi, theta = s[3], s[4]
        prod = euler_rate_matrix(phi, theta) @ euler_to_body_matrix(phi, theta)
        np.testing.assert_allclose(prod, np.eye(3), atol=1e-12)
        rates = s[RATES]
        back = body_rates_from_euler_rates(euler_rates(*rates, phi, theta), phi, theta)
        np.testing.assert_allclose(back, rates, atol=1e-12)


def test_euler_to_body_matrix_rate_is_derivative():
    """Analytic derivative matches a central difference along the Euler rates."""
    phi, theta, phi_dot, theta_dot = 0.4, -0.3, 1.3, -0.7
    h = 1e-6
    plus = euler_to_body_matrix(phi + h * phi_dot, theta + h * theta_dot)
    minus = euler_to_body_matrix(phi - h * phi_dot, theta - h * theta_dot)
    numeric = (plus - minus) / (2 * h)
    np.testing.assert_allclose(euler_to_body_matrix_rate(phi, theta, phi_dot, theta_dot), numeric, atol=1e-8)


def test_euler_to_body_matrix_accel_is_derivative():
    """Second derivative matches a central difference of the first along a curved path."""
    phi, theta = 2.6, 0.5
    phi_dot, theta_dot, phi_ddot, theta_ddot = -1.1, 0.8, 14.0, -6.0
    h = 1e-6

    def rate_at(t):
        return euler_to_body_matrix_rate(
            phi + phi_dot * t + 0.5 * phi_ddot * t * t,
            theta + theta_dot * t + 0.5 * theta_ddot * t * t,
            phi_dot + phi_ddot * t,
            theta_dot + theta_ddot * t,
        )

    numeric = (rate_at(h) - rate_at(-h)) / (2 * h)
    analytic = euler_to_body_matrix_accel(phi, theta, phi_dot, theta_dot, phi_ddot, theta_ddot)
    np.testing.assert_allclose(analytic, numeric, atol=1e-7)


def test_thrust_flag():
    assert thrust_flag(0.0) == -1.0
    assert thrust_flag(math.pi) == 1.0
    assert thrust_flag(-math.pi) == 1.0
    assert thrust_flag(math.pi / 2) == -1.0  # cos is ~6e-17, positive side
    assert thrust_flag(2.0) == 1.0


def test_wrench_at_trim(trim, rotor, vehicle):
    wr = wrench_from_cts(np.full(4, trim.thrust_coeff), -1.0, rotor, vehicle)
    assert wr.thrust == pytest.approx(-vehicle.weight, rel=1e-12)
    assert wr.body_force_z == pytest.approx(-vehicle.weight, rel=1e-12)
    np.testing.assert_allclose(wr.moments, 0.0, atol=1e-15)


def test_alternating_pattern_cancels(rotor, vehicle):
    """(c, -c, c, -c): thrust and moments all vanish since yaw torque depends on |ct|."""
    c = 0.008
    for flag in (-1.0, 1.0):
        wr = wrench_from_cts(np.array([c, -c, c, -c]), flag, rotor, vehicle)
        assert wr.thrust == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(wr.moments, 0.0, atol=1e-12)


def test_differential_pattern_changes_yaw_only(trim, rotor, vehicle):
    c, d = trim.thrust_coeff, 0.002
    base = wrench_from_cts(np.full(4, c), -1.0, rotor, vehicle)
    wr = wrench_from_cts(np.array([c + d, c - d, c + d, c - d]), -1.0, rotor, vehicle)
    assert wr.thrust == pytest.approx(base.thrust, rel=1e-12)
    assert wr.roll == pytest.approx(base.roll, abs=1e-12)
    assert wr.pitch == pytest.approx(base.pitch, abs=1e-12)
    assert wr.yaw > 0.0  # upright: -flag = +1


def test_hover_equilibria(trim, rotor, vehicle):
    """Upright hover with positive ct and inverted hover with negative ct are both equilibria."""
    ct = trim.thrust_coeff
    up = make_state()
    d_up = state_derivative(up, wrench_from_cts(np.full(4, ct), thrust_flag(0.0), rotor, vehicle), vehicle)
    np.testing.assert_allclose(d_up, 0.0, atol=1e-12)

    inv = make_state(phi=math.pi)
    d_inv = state_derivative(inv, wrench_from_cts(np.full(4, -ct), thrust_flag(math.pi), rotor, vehicle), vehicle)
    np.testing.assert_allclose(d_inv, 0.0, atol=1e-12)


def test_free_fall_and_gyroscopic(vehicle):
    zero = Wrench(thrust=0.0, roll=0.0, pitch=0.0, yaw=0.0, flag=-1.0)
    d = state_derivative(make_state(), zero, vehicle)
    assert d[8] == pytest.approx(vehicle.gravity)

    s = make_state(p=1.0, q=2.0, r=3.0)
    d = state_derivative(s, zero, vehicle)
    expected = body_angular_acceleration(np.array([1.0, 2.0, 3.0]), np.zeros(3), vehicle)
    np.testing.assert_allclose(d[RATES], expected)
    iyy, izz, ixx = vehicle.iyy, vehicle.izz, vehicle.ixx
    assert d[9] == pytest.approx((iyy - izz) / ixx * 6.0)
    assert d[11] == pytest.approx(0.0)  # ixx == iyy


def test_frame_equivalence(rotor, vehicle):
    """Inertial acceleration equals d/dt (R v) computed from the body-frame equations."""
    rng = np.random.default_rng(3)
    for s in _random_states(1000, seed=11):
        ct = rng.uniform(-0.015, 0.015, 4)
        wr = wrench_from_cts(ct, thrust_flag(s[3]), rotor, vehicle)
        d = state_derivative(s, wr, vehicle)
        phi, theta, psi = s[EULER]
        rot = rotation_body_to_inertial(phi, theta, psi)
        # d/dt R = R [omega]x
        omega = s[RATES]
        skew = np.array([[0, -omega[2], omega[1]], [omega[2], 0, -omega[0]], [-omega[1], omega[0], 0]])
        lhs = rot @ skew @ s[VEL] + rot @ d[VEL]
        np.testing.assert_allclose(lhs, inertial_acceleration(s, wr, vehicle), atol=1e-10)
        np.testing.assert_allclose(d[POS], rot @ s[VEL], atol=1e-12)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
