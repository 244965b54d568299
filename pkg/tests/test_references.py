"""Tests for reference trajectories."""

import math

import numpy as np
import pytest

from vpquad.core.references import HoverReference, SinusoidReference


def test_hover_reference_is_constant():
    ref = HoverReference(position=(1.0, -2.0, -3.0), psi=0.3)
    for t in (0.0, 1.7, 100.0):
        point = ref(t)
        np.testing.assert_array_equal(point.position, [1.0, -2.0, -3.0])
        np.testing.assert_array_equal(point.velocity, 0.0)
        np.testing.assert_array_equal(point.acceleration, 0.0)
        assert point.psi == 0.3


def test_sinusoid_values():
    ref = SinusoidReference()
    np.testing.assert_allclose(ref(0.0).position, 0.0, atol=1e-15)
    np.testing.assert_allclose(ref(1.0).position, 1.0, atol=1e-12)  # quarter period at pi/2 rad/s
    np.testing.assert_allclose(ref(0.0).velocity, math.pi / 2, atol=1e-12)


def test_sinusoid_derivatives_match_finite_differences():
    ref = SinusoidReference(amplitude=0.7, omega=2.3, axes=(True, False, True), center=(0.0, 1.0, -2.0))
    h = 1e-5
    for t in np.linspace(0.0, 5.0, 11):
        dp = (ref(t + h).position - ref(t - h).position) / (2 * h)
        dv = (ref(t + h).velocity - ref(t - h).velocity) / (2 * h)
        np.testing.assert_allclose(ref(t).velocity, dp, atol=1e-8)
        np.testing.assert_allclose(ref(t).acceleration, dv, atol=1e-7)
        assert ref(t).position[1] == pytest.approx(1.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
