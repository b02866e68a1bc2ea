import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from config.exceptions import PreconditionError
from species.levels import LevelSpec, TrapGeometry
from species.loader import builtin_species

from .shifts import (
    geometry_factor, quad_average_over_F, quad_average_over_mF, quad_matrix, quad_scalar,
    quad_shift, quad_shift_via_mj, quad_trace_mixed, relative_coefficient,
)

GEOMETRY = TrapGeometry(a_grad=1.0e6, epsilon=0.3, alpha=0.4, beta=0.7)

geometries = st.builds(
    TrapGeometry,
    a_grad=st.floats(1e3, 1e8),
    epsilon=st.floats(-1.0, 1.0),
    alpha=st.floats(0.0, 2 * math.pi),
    beta=st.floats(0.0, math.pi),
)


def toy_level(two_i, two_j, theta_q=1.0):
    return LevelSpec(key='toy', label='X', nuclear_spin=two_i, j=two_j, g_j=1.0, g_i=0.0, theta_q=theta_q)


def small_levels():
    for two_i in range(0, 10):
        for two_j in range(2, 10):
            yield toy_level(two_i, two_j)


class GeometryFactorTests(SimpleTestCase):

    def test_aligned_axis(self):
        self.assertEqual(geometry_factor(TrapGeometry(1.0, beta=0.0)), 2.0)

    def test_magic_angle(self):
        beta = math.acos(1 / math.sqrt(3))
        self.assertAlmostEqual(geometry_factor(TrapGeometry(1.0, beta=beta)), 0.0, places=15)

    def test_asymmetric_perpendicular(self):
        geom = TrapGeometry(1.0, epsilon=0.5, alpha=0.0, beta=math.pi / 2)
        self.assertAlmostEqual(geometry_factor(geom), -0.5, places=15)


class QuadShiftTests(SimpleTestCase):

    def test_half_integer_j_has_no_shift(self):
        level = builtin_species().level('sr87/5S1/2')
        self.assertEqual(quad_shift(level, 8, 0, GEOMETRY).value, 0.0)

    def test_zero_moment_has_no_shift(self):
        self.assertEqual(quad_shift(toy_level(14, 2, theta_q=0.0), 14, 0, GEOMETRY).value, 0.0)

    def test_inconsistent_moment_rejected(self):
        with self.assertRaises(PreconditionError):
            quad_shift(toy_level(7, 1, theta_q=0.5), 6, 0, GEOMETRY)

    def test_factorization(self):
        level = builtin_species().level('lu176/3D1')
        shift = quad_shift(level, 16, 4, GEOMETRY)
        self.assertEqual(shift.value, shift.coefficient * shift.scalar)
        self.assertEqual(shift.scalar, quad_scalar(level, GEOMETRY))
        self.assertNotEqual(shift.value, 0.0)

    def test_linear_in_gradient_and_moment(self):
        level = builtin_species().level('lu176/3D1')
        base = quad_shift(level, 12, 2, GEOMETRY).value
        self.assertAlmostEqual(quad_shift(level, 12, 2, GEOMETRY.scaled(3.0)).value / base, 3.0, places=12)
        doubled = level.with_constants(theta_q=2 * level.theta_q)
        self.assertAlmostEqual(quad_shift(doubled, 12, 2, GEOMETRY).value / base, 2.0, places=12)

    def test_mf_sum_rule(self):
        for level in small_levels():
            for two_f in level.f_values():
                coefficients = [relative_coefficient(level, two_f, two_f, m) for m in range(-two_f, two_f + 1, 2)]
                scale = max(max(abs(c) for c in coefficients), 1e-300)
                self.assertLessEqual(abs(sum(coefficients)), 1e-12 * scale * len(coefficients))

    def test_f_sum_rule(self):
        for level in small_levels():
            if level.two_i < level.two_j:
                continue
            for two_mf in range(-(level.two_i - level.two_j), level.two_i - level.two_j + 1, 2):
                coefficients = [relative_coefficient(level, f, f, two_mf) for f in level.f_values()]
                self.assertEqual(len(coefficients), level.two_j + 1)
                scale = max(abs(c) for c in coefficients)
                self.assertLessEqual(abs(sum(coefficients)), 1e-12 * scale * len(coefficients))

    def test_f_sum_does_not_vanish_when_i_below_j(self):
        level = toy_level(1, 5)
        residuals = [
            abs(sum(relative_coefficient(level, f, f, m) for f in level.block_basis(m)))
            for m in (-2, 0, 2)
        ]
        self.assertGreater(min(residuals), 1e-3)
        sr88 = builtin_species().level('sr88/4D5/2')
        self.assertNotEqual(quad_shift(sr88, 5, 1, GEOMETRY).value, 0.0)

    def test_mj_route_matches_diagonal(self):
        levels = [builtin_species().level(ref) for ref in ('lu176/3D1', 'lu175/3D1', 'sr87/4D5/2')]
        levels.append(toy_level(1, 5))
        for level in levels:
            for two_f in level.f_values():
                for two_mf in range(-two_f, two_f + 1, 2):
                    direct = quad_shift(level, two_f, two_mf, GEOMETRY).value
                    via_mj = quad_shift_via_mj(level, two_f, two_mf, GEOMETRY)
                    scale = abs(quad_scalar(level, GEOMETRY))
                    self.assertLessEqual(abs(direct - via_mj), 1e-12 * scale)

    @settings(deadline=None, max_examples=100)
    @given(geometries)
    def test_sum_rules_for_random_geometries(self, geom):
        for level in (builtin_species().level('lu176/3D1'), builtin_species().level('sr87/4D5/2')):
            two_mf = (level.two_i + level.two_j) % 2
            shifts = [abs(quad_shift(level, f, two_mf, geom).value) for f in level.f_values()]
            scale = max(max(shifts), 1e-300)
            self.assertLessEqual(abs(quad_average_over_F(level, two_mf, geom)), 1e-12 * scale)
            for two_f in level.f_values():
                self.assertLessEqual(abs(quad_average_over_mF(level, two_f, geom)), 1e-12 * abs(quad_scalar(level, geom)) * 4)


class AverageOverFTests(SimpleTestCase):

    def test_lu176_m0(self):
        level = builtin_species().level('lu176/3D1')
        scale = max(abs(quad_shift(level, f, 0, GEOMETRY).value) for f in (12, 14, 16))
        self.assertLess(abs(quad_average_over_F(level, 0, GEOMETRY)), 1e-10 * scale)

    def test_lu175_three_halves(self):
        level = builtin_species().level('lu175/3D1')
        scale = max(abs(quad_shift(level, f, 3, GEOMETRY).value) for f in (5, 7, 9))
        self.assertLess(abs(quad_average_over_F(level, 3, GEOMETRY)), 1e-10 * scale)

    def test_single_f_case_not_permitted(self):
        with self.assertRaises(PreconditionError):
            quad_average_over_F(toy_level(1, 1, theta_q=0.0), 0, GEOMETRY)

    def test_projection_beyond_i_minus_j_not_permitted(self):
        with self.assertRaisesMessage(PreconditionError, 'I >= J'):
            quad_average_over_F(builtin_species().level('lu176/3D1'), 14, GEOMETRY)

    def test_i_below_j_not_permitted(self):
        with self.assertRaises(PreconditionError):
            quad_average_over_F(builtin_species().level('sr88/4D5/2'), 1, GEOMETRY)


class TraceMixedTests(SimpleTestCase):

    def test_zero_field_reduces_to_average(self):
        level = builtin_species().level('lu176/3D1')
        self.assertAlmostEqual(
            quad_trace_mixed(level, 2, 0.0, GEOMETRY),
            3 * quad_average_over_F(level, 2, GEOMETRY),
            delta=1e-12 * abs(quad_scalar(level, GEOMETRY)),
        )

    def test_vanishes_with_strong_mixing(self):
        level = builtin_species().level('lu175/3D1')
        scale = np.max(np.abs(quad_matrix(level, 3, GEOMETRY)))
        for field_gauss in (10.0, 1000.0, 4750.0, 1e4):
            self.assertLess(abs(quad_trace_mixed(level, 3, field_gauss, GEOMETRY)), 1e-10 * scale)

    def test_matrix_symmetric_with_zero_trace(self):
        level = builtin_species().level('sr87/4D5/2')
        for two_mf in (-4, 0, 4):
            matrix = quad_matrix(level, two_mf, GEOMETRY)
            np.testing.assert_allclose(matrix, matrix.T, rtol=1e-12, atol=0)
            self.assertLess(abs(np.trace(matrix)), 1e-12 * np.max(np.abs(matrix)))

    def test_diagonal_matches_low_field_shift(self):
        level = builtin_species().level('lu176/3D1')
        matrix = quad_matrix(level, 0, GEOMETRY)
        for index, two_f in enumerate((12, 14, 16)):
            self.assertEqual(matrix[index, index], quad_shift(level, two_f, 0, GEOMETRY).value)

    @settings(deadline=None, max_examples=50)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_random_orthogonal_mixing(self, seed):
        level = builtin_species().level('lu176/3D1')
        matrix = quad_matrix(level, 0, GEOMETRY)
        rng = np.random.default_rng(seed)
        mixing, _ = np.linalg.qr(rng.normal(size=matrix.shape))
        total = sum(float(mixing[:, k] @ matrix @ mixing[:, k]) for k in range(matrix.shape[0]))
        self.assertLess(abs(total), 1e-12 * np.max(np.abs(matrix)) * matrix.shape[0])
