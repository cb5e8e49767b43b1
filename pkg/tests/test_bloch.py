import math

import numpy as np
import pytest

from qrot import (DomainError, angle_between, angles_to_vec, normalize,
                  state_to_bloch, vec_to_angles)
from qrot.rotation import gate_ry, gate_rz

from conftest import WORKED_AXIS, WORKED_VECTOR, random_unit


class TestVecToAngles:
    def test_diagonal_vector(self):
        theta, phi = vec_to_angles(WORKED_VECTOR)
        assert abs(theta - math.acos(1.0 / math.sqrt(3.0))) <= 1e-12
        assert abs(phi - math.pi / 4.0) <= 1e-12
        # the commonly quoted 4-decimal value
        assert abs(theta - 0.9553) <= 1e-4

    def test_worked_axis(self):
        theta, phi = vec_to_angles(WORKED_AXIS)
        assert abs(theta - math.acos(1.0 / math.sqrt(6.0))) <= 1e-12
        assert abs(phi - math.atan2(1.0, 2.0)) <= 1e-12
        assert abs(phi - 0.4636) <= 1e-4

    def test_north_pole(self):
        assert vec_to_angles([0.0, 0.0, 1.0]) == (0.0, 0.0)

    def test_south_pole_phi_convention(self):
        theta, phi = vec_to_angles([0.0, 0.0, -1.0])
        assert theta == pytest.approx(math.pi, abs=1e-15)
        assert phi == 0.0

    def test_rejects_non_unit(self):
        with pytest.raises(DomainError):
            vec_to_angles([1.0, 1.0, 1.0])


class TestAnglesToVec:
    def test_north_pole(self):
        assert np.allclose(angles_to_vec(0.0, 0.0), [0.0, 0.0, 1.0], atol=1e-15)

    def test_equator_x(self):
        assert np.allclose(angles_to_vec(math.pi / 2.0, 0.0), [1.0, 0.0, 0.0], atol=1e-15)

    def test_inverse_of_vec_to_angles(self):
        v = angles_to_vec(0.9553, math.pi / 4.0)
        assert np.max(np.abs(v - WORKED_VECTOR)) <= 1e-4

    def test_round_trip_random(self):
        rng = np.random.default_rng(10)
        for _ in range(200):
            v = random_unit(rng)
            theta, phi = vec_to_angles(v)
            assert np.max(np.abs(angles_to_vec(theta, phi) - v)) <= 1e-10
            assert 0.0 <= theta <= math.pi
            assert -math.pi < phi <= math.pi


class TestStateToBloch:
    def test_ground_state(self):
        assert np.allclose(state_to_bloch([1.0, 0.0]), [0.0, 0.0, 1.0], atol=1e-15)

    def test_plus_state(self):
        psi = np.array([1.0, 1.0]) / math.sqrt(2.0)
        assert np.allclose(state_to_bloch(psi), [1.0, 0.0, 0.0], atol=1e-15)

    def test_initialized_diagonal_state(self):
        theta = math.acos(1.0 / math.sqrt(3.0))
        psi = gate_rz(math.pi / 4.0) @ gate_ry(theta) @ np.array([1.0, 0.0])
        assert np.max(np.abs(state_to_bloch(psi) - WORKED_VECTOR)) <= 1e-10

    def test_matches_spherical_parameterization(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            theta = rng.uniform(0.0, math.pi)
            phi = rng.uniform(-math.pi, math.pi)
            psi = gate_rz(phi) @ gate_ry(theta) @ np.array([1.0, 0.0])
            assert np.max(np.abs(state_to_bloch(psi) - angles_to_vec(theta, phi))) <= 1e-10

    def test_global_phase_invariance(self):
        # exact in real arithmetic; float rounding leaves at most ~1 ulp
        rng = np.random.default_rng(12)
        psi = rng.normal(size=2) + 1j * rng.normal(size=2)
        psi /= np.linalg.norm(psi)
        shifted = np.exp(1.234j) * psi
        assert np.max(np.abs(state_to_bloch(psi) - state_to_bloch(shifted))) <= 1e-15

    def test_rejects_unnormalized(self):
        with pytest.raises(DomainError):
            state_to_bloch([1.0, 1.0])


class TestAngleBetween:
    def test_equal_vectors(self):
        assert angle_between([0.3, -0.2, 0.5], [0.3, -0.2, 0.5]) == 0.0

    def test_orthogonal(self):
        assert angle_between([1, 0, 0], [0, 1, 0]) == pytest.approx(math.pi / 2.0)

    def test_forty_five_degrees(self):
        assert angle_between([1, 0, 0], [1, 1, 0]) == pytest.approx(math.pi / 4.0)

    def test_antiparallel_clamped(self):
        v = np.array([0.6, -0.3, 0.5])
        assert angle_between(v, -v) == pytest.approx(math.pi)

    def test_zero_vector_rejected(self):
        with pytest.raises(DomainError):
            angle_between([0, 0, 0], [1, 0, 0])

    def test_scale_invariance(self):
        assert angle_between([2, 0, 0], [5, 5, 0]) == pytest.approx(math.pi / 4.0)


class TestNormalize:
    def test_returns_norm(self):
        unit, norm = normalize([3.0, 0.0, 4.0])
        assert norm == 5.0
        assert np.allclose(unit, [0.6, 0.0, 0.8])

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            normalize([0.0, 0.0, 0.0])

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            normalize([1.0, float("nan"), 0.0])
