import json
import math
import tempfile
from fractions import Fraction
from pathlib import Path

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from config.exceptions import ConfigurationError, SchemeFileError
from quadrupole.shifts import quad_shift
from species.constants import CONSTANTS
from species.levels import LevelSpec, TrapGeometry
from species.loader import builtin_species
from zeeman.transitions import StateRef, Transition

from .evaluation import (
    avg_derivative, avg_frequency, avg_slope, expected_linear_slope, gF_average,
    quadrupole_residual, quadrupole_sum_rule_checks, verify_scheme,
)
from .loader import dumps_scheme, load_schemes, parse_schemes, resolve_scheme
from .schemes import BUILTIN_SCHEMES, builtin_scheme, completeness, infer_delta_m, make_scheme

GEOMETRY = TrapGeometry(a_grad=1.0e6, epsilon=0.3, alpha=0.4, beta=0.7)

geometries = st.builds(
    TrapGeometry,
    a_grad=st.floats(1e3, 1e8),
    epsilon=st.floats(-1.0, 1.0),
    alpha=st.floats(0.0, 2 * math.pi),
    beta=st.floats(0.0, math.pi),
)


def level(ref):
    return builtin_species().level(ref)


def partial_lu176():
    """lu176_m0 without the F'=8 line"""
    ground, excited = level('lu176/1S0'), level('lu176/3D1')
    return make_scheme('partial', [
        (StateRef(ground, 14, 0), StateRef(excited, 12, 0), Fraction(1, 2)),
        (StateRef(ground, 14, 0), StateRef(excited, 14, 0), Fraction(1, 2)),
    ])


LU175_DOCUMENT = {
    'species': 'lu175',
    'schemes': [{
        'name': 'lu175_fip',
        'delta_m_twice': -2,
        'transitions': [
            {'ground': ['1S0', 7, 5], 'excited': ['3D1', two_f, 3], 'weight': [1, 3]}
            for two_f in (5, 7, 9)
        ],
    }],
}

SR87_DOCUMENT = {
    'species': 'sr87',
    'schemes': [{
        'name': 'sr87_m0',
        'delta_m_twice': 0,
        'transitions': [
            {'ground': ['5S1/2', two_g, 0], 'excited': ['4D5/2', 4 * k + two_g - 8, 0], 'weight': [1, 6]}
            for k in (1, 2, 3) for two_g in (8, 10)
        ],
    }],
}

F_AVERAGED_SCHEMES = [key for key in BUILTIN_SCHEMES if key != 'sr88_zeeman6']


def write_file(directory, name, content):
    path = Path(directory) / name
    path.write_text(content if isinstance(content, str) else json.dumps(content), encoding='utf-8')
    return path


class BuiltinSchemeTests(SimpleTestCase):

    def test_all_builtins_build(self):
        for key in BUILTIN_SCHEMES:
            self.assertEqual(builtin_scheme(key).name, key)

    def test_lu175_delta_m(self):
        scheme = builtin_scheme('lu175_fip')
        self.assertEqual(scheme.delta_m, Fraction(-1))
        self.assertEqual(infer_delta_m(scheme.components), -2)

    def test_sr87_weights(self):
        self.assertEqual(builtin_scheme('sr87_m0').weights, (Fraction(1, 6),) * 6)

    def test_sr88_zeeman_components(self):
        scheme = builtin_scheme('sr88_zeeman6')
        self.assertEqual(scheme.weights, (Fraction(1, 6),) * 6)
        self.assertEqual(scheme.delta_m, 0)
        self.assertEqual(sorted(c.excited.two_mf for c in scheme.components), [-5, -3, -1, 1, 3, 5])
        flags = completeness(scheme)
        self.assertFalse(flags.excited)
        self.assertFalse(flags.ground)

    def test_forbidden_scheme_weights(self):
        scheme = builtin_scheme('lu176_forbidden_m0')
        self.assertEqual(len(scheme.components), 4)
        self.assertEqual(sum(scheme.weights), 1)
        self.assertEqual(scheme.delta_m, 0)

    def test_completeness(self):
        for key in F_AVERAGED_SCHEMES:
            self.assertTrue(completeness(builtin_scheme(key)).complete, key)
        flags = completeness(partial_lu176())
        self.assertFalse(flags.excited)
        self.assertTrue(flags.ground)

    def test_unknown_key(self):
        with self.assertRaises(ConfigurationError):
            builtin_scheme('lu177_m0')


class SchemeValidationTests(SimpleTestCase):

    def setUp(self):
        self.ground = StateRef(level('lu176/1S0'), 14, 0)
        self.excited = [StateRef(level('lu176/3D1'), f, 0) for f in (12, 14, 16)]

    def test_weights_must_sum_to_one(self):
        with self.assertRaisesMessage(ConfigurationError, 'sum to'):
            make_scheme('bad', [(self.ground, e, Fraction(1, 4)) for e in self.excited])

    def test_weights_must_be_positive(self):
        with self.assertRaises(ConfigurationError):
            make_scheme('bad', [
                (self.ground, self.excited[0], Fraction(3, 2)),
                (self.ground, self.excited[1], Fraction(-1, 2)),
            ])

    def test_duplicate_transition(self):
        with self.assertRaises(ConfigurationError):
            make_scheme('bad', [(self.ground, self.excited[0], Fraction(1, 2))] * 2)

    def test_declared_delta_m_must_match(self):
        with self.assertRaisesMessage(ConfigurationError, 'declared'):
            make_scheme('bad', [(self.ground, e, Fraction(1, 3)) for e in self.excited], two_delta_m=2)

    def test_empty(self):
        with self.assertRaises(ConfigurationError):
            make_scheme('bad', [], two_delta_m=0)


class GFactorAverageTests(SimpleTestCase):

    def test_equals_nuclear_g_factor(self):
        toy = LevelSpec(key='toy', label='X', nuclear_spin=14, j=2, g_j=0.5, g_i=-2.46e-4)
        self.assertAlmostEqual(gF_average(toy), -2.46e-4, delta=1e-14)

    def test_builtin_levels(self):
        for ref in ('lu176/3D1', 'lu175/3D1', 'sr87/4D5/2', 'sr87/5S1/2'):
            lvl = level(ref)
            self.assertAlmostEqual(gF_average(lvl), lvl.g_i, delta=1e-14)

    def test_single_f(self):
        self.assertEqual(gF_average(level('lu176/1S0')), level('lu176/1S0').g_i)

    def test_fails_for_i_below_j(self):
        toy = LevelSpec(key='toy', label='X', nuclear_spin=1, j=3, g_j=1.0, g_i=0.0)
        self.assertAlmostEqual(gF_average(toy), 1.0, places=12)


class AverageFrequencyTests(SimpleTestCase):

    def test_lu176_average_does_not_move(self):
        scheme = builtin_scheme('lu176_m0')
        base = avg_frequency(scheme, 0.0)
        for field_gauss in (0.1, 1.0, 10.0, 100.0):
            self.assertLess(abs(avg_frequency(scheme, field_gauss) - base), 1e-4)

    def test_single_transition(self):
        transition = builtin_scheme('lu176_m0').transitions[0]
        scheme = make_scheme('one', [(transition.ground, transition.excited, 1)])
        for field_gauss in (0.0, 5.0, 500.0):
            self.assertEqual(avg_frequency(scheme, field_gauss), transition.frequency(field_gauss))

    def test_lu175_linear_slope(self):
        scheme = builtin_scheme('lu175_fip')
        expected = expected_linear_slope(scheme)
        self.assertAlmostEqual(expected, 3.47e-4 * CONSTANTS.mu_b_hz_per_gauss, delta=1e-9)
        self.assertAlmostEqual(expected, 486.0, delta=0.5)
        derivative = avg_derivative(scheme, 10.0, step=1.0)
        self.assertAlmostEqual(derivative.value, expected, delta=1e-3 * expected)
        self.assertAlmostEqual(avg_slope(scheme, 10.0), expected, delta=1e-6 * expected)

    def test_synthesized_forbidden_line(self):
        ground, excited = level('lu176/1S0'), level('lu176/3D1')
        target = StateRef(excited, 14, 0)
        pair = make_scheme('pair', [
            (StateRef(ground, 14, 2), target, Fraction(1, 2)),
            (StateRef(ground, 14, -2), target, Fraction(1, 2)),
        ])
        forbidden = Transition(StateRef(ground, 14, 0), target)
        for field_gauss in (0.5, 5.0, 50.0):
            direct = forbidden.frequency(field_gauss)
            self.assertAlmostEqual(avg_frequency(pair, field_gauss), direct, delta=1e-9 * abs(direct))
            self.assertLess(abs(avg_slope(pair, field_gauss) - forbidden.slope(field_gauss)), 1e-3)

    def test_forbidden_scheme_matches_triple(self):
        triple, forbidden = builtin_scheme('lu176_m0'), builtin_scheme('lu176_forbidden_m0')
        for field_gauss in (1.0, 20.0):
            self.assertLess(abs(avg_frequency(triple, field_gauss) - avg_frequency(forbidden, field_gauss)), 1e-4)


class VerifySchemeTests(SimpleTestCase):

    def test_lu176_passes(self):
        report = verify_scheme(builtin_scheme('lu176_m0'), GEOMETRY, [0.1, 1.0])
        self.assertTrue(report.passed, report.checks)
        self.assertEqual(
            [c.name for c in report.checks],
            ['completeness', 'zeeman_slope', 'quadrupole_residual', 'ground_quadrupole_residual',
             'component_sensitivity[0.1]', 'component_sensitivity[1.0]'],
        )
        self.assertLess(report.get('component_sensitivity[0.1]').measured, 5.0)
        self.assertIsNone(report.get('component_sensitivity[0.1]').threshold)

    def test_sr87_passes(self):
        report = verify_scheme(builtin_scheme('sr87_m0'), GEOMETRY)
        self.assertTrue(report.passed, report.checks)
        residual = report.get('quadrupole_residual')
        self.assertLessEqual(residual.measured, residual.threshold)
        self.assertGreater(residual.threshold, 0.0)

    def test_sr88_cancels_without_f_average(self):
        report = verify_scheme(builtin_scheme('sr88_zeeman6'), GEOMETRY)
        self.assertFalse(report.passed)
        self.assertFalse(report.get('completeness').passed)
        for name in ('zeeman_slope', 'quadrupole_residual', 'ground_quadrupole_residual'):
            self.assertTrue(report.get(name).passed, name)
        self.assertGreater(report.get('quadrupole_residual').threshold, 0.0)

    def test_lu175_passes_with_nonzero_slope(self):
        report = verify_scheme(builtin_scheme('lu175_fip'), GEOMETRY)
        self.assertTrue(report.passed, report.checks)
        self.assertAlmostEqual(report.get('zeeman_slope').detail['expected'], 486.0, delta=0.5)

    def test_incomplete_scheme_fails(self):
        report = verify_scheme(partial_lu176(), GEOMETRY)
        self.assertFalse(report.passed)
        self.assertFalse(report.get('completeness').passed)
        self.assertFalse(report.get('quadrupole_residual').passed)
        self.assertTrue(report.get('ground_quadrupole_residual').passed)

    def test_weight_perturbation_is_linear(self):
        scheme = builtin_scheme('lu176_m0')
        excited = level('lu176/3D1')
        difference = quad_shift(excited, 12, 0, GEOMETRY).value - quad_shift(excited, 14, 0, GEOMETRY).value
        for delta in (Fraction(1, 100), Fraction(1, 50), Fraction(1, 10)):
            perturbed = scheme.with_weights([Fraction(1, 3) + delta, Fraction(1, 3) - delta, Fraction(1, 3)])
            residual, _ = quadrupole_residual(perturbed, GEOMETRY)
            self.assertAlmostEqual(residual / float(delta), difference, delta=1e-8 * abs(difference))

    @settings(deadline=None, max_examples=100)
    @given(geometries)
    def test_complete_schemes_cancel_for_random_geometries(self, geom):
        for key in BUILTIN_SCHEMES:
            residual, scale = quadrupole_residual(builtin_scheme(key), geom)
            self.assertLessEqual(abs(residual), 1e-12 * scale)

    def test_sum_rule_checks(self):
        checks = quadrupole_sum_rule_checks(level('lu176/3D1'), GEOMETRY)
        self.assertEqual([c.name for c in checks], ['mf_sum[lu176/3D1]', 'f_sum[lu176/3D1]'])
        self.assertTrue(all(c.passed for c in checks))
        checks = quadrupole_sum_rule_checks(level('sr88/4D5/2'), GEOMETRY, '#3')
        self.assertEqual([c.name for c in checks], ['mf_sum[sr88/4D5/2]#3'])


class SchemeFileTests(SimpleTestCase):

    def test_load_matches_builtin(self):
        with tempfile.TemporaryDirectory() as directory:
            path = write_file(directory, 'schemes.json', LU175_DOCUMENT)
            schemes = load_schemes(path)
        self.assertEqual(schemes, [builtin_scheme('lu175_fip')])

    def test_round_trip(self):
        for key in BUILTIN_SCHEMES:
            scheme = builtin_scheme(key)
            self.assertEqual(parse_schemes(json.loads(dumps_scheme(scheme))), [scheme])

    def test_unknown_field_rejected_unless_lax(self):
        document = json.loads(json.dumps(LU175_DOCUMENT))
        document['schemes'][0]['transitions'][0]['colour'] = 'red'
        with self.assertRaisesMessage(SchemeFileError, 'schemes[0].transitions[0].colour'):
            parse_schemes(document)
        self.assertEqual(len(parse_schemes(document, strict=False)), 1)

    def test_bad_weights_named(self):
        document = json.loads(json.dumps(LU175_DOCUMENT))
        document['schemes'][0]['transitions'][0]['weight'] = [1, 2]
        with self.assertRaisesMessage(SchemeFileError, 'schemes[0]'):
            parse_schemes(document)

    def test_malformed_weight(self):
        document = json.loads(json.dumps(LU175_DOCUMENT))
        document['schemes'][0]['transitions'][1]['weight'] = [1, 0]
        with self.assertRaisesMessage(SchemeFileError, 'schemes[0].transitions[1].weight'):
            parse_schemes(document)

    def test_bare_label_needs_species(self):
        document = json.loads(json.dumps(LU175_DOCUMENT))
        del document['species']
        with self.assertRaisesMessage(SchemeFileError, 'key/label'):
            parse_schemes(document)

    def test_bare_labels_with_slash(self):
        self.assertEqual(parse_schemes(SR87_DOCUMENT), [builtin_scheme('sr87_m0')])
        document = json.loads(json.dumps(SR87_DOCUMENT))
        document['schemes'][0]['transitions'][0]['ground'][0] = 'sr87/5S1/2'
        self.assertEqual(parse_schemes(document), [builtin_scheme('sr87_m0')])

    def test_unknown_level(self):
        document = json.loads(json.dumps(LU175_DOCUMENT))
        document['schemes'][0]['transitions'][0]['excited'][0] = '3D2'
        with self.assertRaises(SchemeFileError):
            parse_schemes(document)

    def test_malformed_json_position(self):
        with tempfile.TemporaryDirectory() as directory:
            path = write_file(directory, 'broken.json', '{"schemes": [\n  {"name": }\n]}')
            with self.assertRaisesMessage(SchemeFileError, 'line 2'):
                load_schemes(path)

    def test_resolve(self):
        self.assertEqual(resolve_scheme('sr87_m0').name, 'sr87_m0')
        with tempfile.TemporaryDirectory() as directory:
            document = json.loads(json.dumps(LU175_DOCUMENT))
            document['schemes'].append(dict(document['schemes'][0], name='copy'))
            path = write_file(directory, 'two.json', document)
            self.assertEqual(resolve_scheme(f'{path}#copy').name, 'copy')
            with self.assertRaisesMessage(SchemeFileError, '#<name>'):
                resolve_scheme(str(path))
        with self.assertRaises(ConfigurationError):
            resolve_scheme('no_such_scheme')
