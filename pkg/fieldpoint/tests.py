import math

from django.test import SimpleTestCase

from averaging.evaluation import component_slopes
from averaging.schemes import builtin_scheme, make_scheme
from config.exceptions import NoFieldIndependentPointError, PreconditionError
from species.levels import FinePartner, LevelSpec
from species.loader import builtin_species
from zeeman.transitions import StateRef

from .residual import residual_quadratic, residual_quadratic_coefficient
from .search import ANALYTIC, NUMERIC, analytic_fip, fie_model, find_fip

OMEGA_FS = 2 * math.pi * 19.16e12
PUBLISHED_SLOPES = (25.5e3, -20.3e3, -5.2e3)


def lu175_excited():
    return builtin_species().level('lu175/3D1')


def toy_scheme(two_mf_ground=1, two_mf_excited=-1):
    """Two J = 0 levels: the averaged shift is exactly linear plus the partner's quadratic"""
    ground = LevelSpec(key='toy', label='G', nuclear_spin=1, j=0, g_j=0.0, g_i=-3.47e-4)
    excited = LevelSpec(
        key='toy', label='X', nuclear_spin=1, j=0, g_j=0.0, g_i=-3.47e-4,
        fs_partner=FinePartner(OMEGA_FS, 1.0, 2.0),
    )
    return make_scheme('toy', [(StateRef(ground, 1, two_mf_ground), StateRef(excited, 1, two_mf_excited), 1)])


class ResidualQuadraticTests(SimpleTestCase):

    def test_coefficient(self):
        coefficient = residual_quadratic_coefficient(lu175_excited())
        self.assertLess(coefficient, 0)
        self.assertAlmostEqual(abs(coefficient), 0.050, delta=0.03 * 0.050)
        self.assertAlmostEqual(coefficient, -0.05112, delta=1e-4)

    def test_zero_field(self):
        self.assertEqual(residual_quadratic(lu175_excited(), 0.0), 0.0)

    def test_equal_g_factors(self):
        level = lu175_excited().with_constants(fs_partner=FinePartner(OMEGA_FS, 2.0, 2.0))
        for field_gauss in (0.0, 10.0, 1e4):
            self.assertEqual(residual_quadratic(level, field_gauss), 0.0)

    def test_missing_partner(self):
        with self.assertRaises(PreconditionError):
            residual_quadratic(builtin_species().level('lu175/1S0'), 1.0)


class AnalyticFipTests(SimpleTestCase):

    def test_lu175(self):
        point = analytic_fip(builtin_scheme('lu175_fip'))
        self.assertEqual(point.method, ANALYTIC)
        self.assertAlmostEqual(point.B_star, 4750.2, delta=1.0)
        self.assertAlmostEqual(point.curvature, 2 * residual_quadratic_coefficient(lu175_excited()), places=12)

    def test_model_is_stationary_at_b_star(self):
        scheme = builtin_scheme('lu175_fip')
        b_star = analytic_fip(scheme).B_star
        self.assertEqual(fie_model(scheme, None, 0.0), 0.0)
        slope = (fie_model(scheme, None, b_star + 1) - fie_model(scheme, None, b_star - 1)) / 2
        self.assertLess(abs(slope), 1e-6)

    def test_zero_delta_m(self):
        point = analytic_fip(builtin_scheme('lu176_m0'))
        self.assertEqual(point.B_star, 0.0)
        self.assertLess(point.curvature, 0)

    def test_doubling_coupling_halves_b_star(self):
        scheme = builtin_scheme('lu175_fip')
        level = lu175_excited()
        doubled = level.with_constants(fs_partner=FinePartner(OMEGA_FS, 1.0, 1.0 + math.sqrt(2)))
        ratio = analytic_fip(scheme, doubled).B_star / analytic_fip(scheme, level).B_star
        self.assertAlmostEqual(ratio, 0.5, places=12)

    def test_wrong_sign(self):
        with self.assertRaisesMessage(NoFieldIndependentPointError, 'delta m sign'):
            analytic_fip(toy_scheme(two_mf_ground=-1, two_mf_excited=1))


class FindFipTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.scheme = builtin_scheme('lu175_fip')
        cls.point = find_fip(cls.scheme)

    def test_agrees_with_analytic(self):
        analytic = analytic_fip(self.scheme).B_star
        self.assertEqual(self.point.method, NUMERIC)
        self.assertAlmostEqual(self.point.B_star, analytic, delta=0.05 * analytic)

    def test_bracket(self):
        lo, hi = self.point.bracket
        self.assertLess(lo, self.point.B_star)
        self.assertLess(self.point.B_star, hi)
        self.assertLess(hi - lo, 1e-2)
        self.assertLess(abs(self.point.residual_slope), 1e-3)

    def test_component_slopes(self):
        slopes = list(self.point.component_slopes.values())
        self.assertEqual(len(slopes), 3)
        self.assertLess(abs(sum(slopes)), 10.0)
        for slope, expected in zip(slopes, PUBLISHED_SLOPES):
            self.assertAlmostEqual(slope, expected, delta=0.25 * abs(expected))

    def test_curvature(self):
        expected = 2 * residual_quadratic_coefficient(lu175_excited())
        self.assertLess(self.point.curvature, 0)
        self.assertAlmostEqual(self.point.curvature, expected, delta=0.1 * abs(expected))

    def test_sensitivity_reduced(self):
        low_field = max(abs(s) for s in component_slopes(self.scheme, 1e-3).values())
        at_b_star = max(abs(s) for s in self.point.component_slopes.values())
        self.assertLess(at_b_star, low_field)
        self.assertGreater(low_field, 2.9e5)

    def test_toy_model_matches_closed_form(self):
        scheme = toy_scheme()
        numeric = find_fip(scheme).B_star
        analytic = analytic_fip(scheme).B_star
        self.assertAlmostEqual(numeric, analytic, delta=1e-6 * analytic)

    def test_no_sign_change(self):
        with self.assertRaises(NoFieldIndependentPointError):
            find_fip(builtin_scheme('lu176_m0'), 1.0, 100.0)

    def test_interval_checked(self):
        with self.assertRaises(PreconditionError):
            find_fip(self.scheme, 100.0, 10.0)
