import json
import math
import tempfile
from pathlib import Path

from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings, strategies as st

from config.exceptions import ConfigurationError, DomainError, QuantumNumberError, SpeciesFileError

from .constants import CONSTANTS
from .hyperfine import g_factor, hyperfine_centroid, hyperfine_energy
from .levels import LevelSpec, SpeciesDb, TrapGeometry
from .loader import builtin_species, dump_species, dumps_species, flatten_errors, load_species, parse_species


def write_file(directory, name, content):
    path = Path(directory) / name
    path.write_text(content if isinstance(content, str) else json.dumps(content), encoding='utf-8')
    return path


TOY_DOCUMENT = {
    'species': {
        'toy': {
            'gI': -1e-4,
            'levels': [
                {'label': 'D', 'twoI': 3, 'twoJ': 2, 'gJ': 1.0, 'A_hf_Hz': 1e8},
            ],
        },
    },
}


class BuiltinSpeciesTests(SimpleTestCase):

    def test_lu176_excited_level(self):
        level = builtin_species().level('lu176/3D1')
        self.assertEqual(level.two_i, 14)
        self.assertEqual(level.two_j, 2)
        self.assertEqual(level.g_i, -2.46e-4)
        self.assertEqual(level.f_values(), (12, 14, 16))

    def test_lu175_nuclear_g_factor(self):
        self.assertEqual(builtin_species()['lu175'].g_i, -3.47e-4)
        self.assertEqual(builtin_species().level('lu175/3D1').g_i, -3.47e-4)

    def test_all_builtins_present(self):
        self.assertEqual(sorted(builtin_species().keys()), ['lu175', 'lu176', 'sr87', 'sr88'])
        self.assertEqual(builtin_species().level('sr87/5S1/2').two_j, 1)

    def test_approximate_constants_are_flagged(self):
        self.assertTrue(builtin_species().level('lu176/3D1').provenance.startswith('approximate'))

    def test_lu176_intervals_near_ten_gigahertz(self):
        level = builtin_species().level('lu176/3D1')
        for lower, upper in ((12, 14), (14, 16)):
            gap = abs(hyperfine_energy(level, upper) - hyperfine_energy(level, lower))
            self.assertGreater(gap, 9e9)
            self.assertLess(gap, 12e9)

    def test_unknown_references(self):
        db = builtin_species()
        with self.assertRaises(ConfigurationError):
            db.level('lu177/3D1')
        with self.assertRaises(ConfigurationError):
            db.level('lu176/3D2')
        with self.assertRaises(ConfigurationError):
            db.level('lu176')

    def test_fingerprint_covers_constants(self):
        level = builtin_species().level('lu175/3D1')
        self.assertEqual(level.fingerprint, level.with_constants().fingerprint)
        self.assertNotEqual(level.fingerprint, level.with_constants(g_i=-3.4700001e-4).fingerprint)
        self.assertNotEqual(level.fingerprint, level.with_constants(fs_partner=None).fingerprint)
        self.assertNotEqual(level.fingerprint, builtin_species().level('lu176/3D1').fingerprint)


class LoadSpeciesTests(SimpleTestCase):

    def test_no_path_gives_builtins(self):
        self.assertEqual(load_species(), builtin_species())

    def test_empty_file_gives_builtins(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_file(tmp, 'empty.json', '')
            self.assertEqual(load_species(path), builtin_species())

    def test_user_entries_merge_over_builtins(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_file(tmp, 'toy.json', TOY_DOCUMENT)
            db = load_species(path)
        self.assertIn('toy', db)
        self.assertIn('lu176', db)
        self.assertEqual(db.level('toy/D').b_hf, 0.0)

    def test_user_entries_shadow_builtins(self):
        document = {'species': {'lu176': TOY_DOCUMENT['species']['toy']}}
        with tempfile.TemporaryDirectory() as tmp:
            db = load_species(write_file(tmp, 'shadow.json', document))
        self.assertEqual(db['lu176'].labels, ('D',))

    def test_settings_path_used_by_default(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_file(tmp, 'toy.json', TOY_DOCUMENT)
            with override_settings(HFAVG={'SPECIES_PATH': str(path)}):
                self.assertIn('toy', load_species())

    def test_parse_error_reports_position(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_file(tmp, 'bad.json', '{\n  "species": {,\n}')
            with self.assertRaisesMessage(SpeciesFileError, 'line 2 column'):
                load_species(path)

    def test_missing_file(self):
        with self.assertRaises(SpeciesFileError):
            load_species('/nonexistent/species.json')

    def test_unknown_key_rejected_when_strict(self):
        document = json.loads(json.dumps(TOY_DOCUMENT))
        document['species']['toy']['levels'][0]['colour'] = 'blue'
        with self.assertRaisesMessage(SpeciesFileError, 'species.toy.levels[0].colour'):
            parse_species(document)
        self.assertIn('toy', parse_species(document, strict=False))

    def test_error_paths_index_lists(self):
        self.assertEqual(
            flatten_errors({'levels': {1: {'gJ': ['Required.']}}}),
            ['levels[1].gJ: Required.'],
        )
        self.assertEqual(
            flatten_errors({'levels': [{}, {'gJ': ['Required.']}]}),
            ['levels[1].gJ: Required.'],
        )

    def test_validation_error_names_field(self):
        document = json.loads(json.dumps(TOY_DOCUMENT))
        document['species']['toy']['levels'][0]['twoJ'] = 0
        document['species']['toy']['levels'][0]['theta_q_ea02'] = 1.0
        with self.assertRaisesMessage(SpeciesFileError, 'theta_q_ea02'):
            parse_species(document)

    def test_quadrupole_hyperfine_requires_i_and_j_at_least_one(self):
        document = json.loads(json.dumps(TOY_DOCUMENT))
        document['species']['toy']['levels'][0]['twoI'] = 1
        document['species']['toy']['levels'][0]['B_hf_Hz'] = 1e6
        with self.assertRaisesMessage(SpeciesFileError, 'B_hf_Hz'):
            parse_species(document)

    def test_duplicate_labels_rejected(self):
        document = json.loads(json.dumps(TOY_DOCUMENT))
        levels = document['species']['toy']['levels']
        levels.append(dict(levels[0]))
        with self.assertRaisesMessage(SpeciesFileError, 'Duplicate'):
            parse_species(document)

    def test_round_trip(self):
        db = builtin_species()
        with tempfile.TemporaryDirectory() as tmp:
            path = write_file(tmp, 'dump.json', dumps_species(db))
            self.assertEqual(load_species(path), db)
        self.assertEqual(parse_species(json.loads(json.dumps(dump_species(db)))), db)


def toy_level(two_i, two_j, a_hf=0.0, b_hf=0.0, g_j=1.0, g_i=0.0):
    return LevelSpec(
        key='toy', label='X', nuclear_spin=two_i, j=two_j,
        g_j=g_j, g_i=g_i, a_hf=a_hf, b_hf=b_hf,
    )


def nuclear_slope(level, two_f, two_mf):
    """gI part of the low-field slope g_F mF mu_B/h, Hz/G"""
    ff, ii, jj = (x * (x + 2) / 4 for x in (two_f, level.two_i, level.two_j))
    return level.g_i * (ff + ii - jj) / (2 * ff) * two_mf / 2 * CONSTANTS.mu_b_hz_per_gauss


class HyperfineTests(SimpleTestCase):

    def test_j_zero_has_no_structure(self):
        level = builtin_species().level('lu176/1S0')
        self.assertEqual(level.f_values(), (14,))
        self.assertEqual(hyperfine_energy(level, 14), 0.0)

    def test_interval_rule_lu176(self):
        level = toy_level(14, 2, a_hf=1.0e9)
        e6, e7, e8 = (hyperfine_energy(level, f) for f in (12, 14, 16))
        self.assertAlmostEqual((e8 - e7) / 8e9, 1.0, places=12)
        self.assertAlmostEqual((e7 - e6) / 7e9, 1.0, places=12)

    @settings(deadline=None)
    @given(st.integers(0, 12), st.integers(0, 9), st.floats(-1e10, 1e10))
    def test_interval_rule(self, two_i, two_j, a_hf):
        level = toy_level(two_i, two_j, a_hf=a_hf)
        fs = level.f_values()
        for lower, upper in zip(fs, fs[1:]):
            interval = hyperfine_energy(level, upper) - hyperfine_energy(level, lower)
            self.assertLessEqual(abs(interval - a_hf * upper / 2), 1e-12 * abs(a_hf) * upper + 1e-6)

    @settings(deadline=None)
    @given(st.integers(0, 12), st.integers(0, 9), st.floats(-1e10, 1e10), st.floats(-1e10, 1e10))
    def test_weighted_trace_vanishes(self, two_i, two_j, a_hf, b_hf):
        if two_i < 2 or two_j < 2:
            b_hf = 0.0
        level = toy_level(two_i, two_j, a_hf=a_hf, b_hf=b_hf)
        scale = max(abs(a_hf), abs(b_hf), 1.0) * (two_i + 1) * (two_j + 1) * (two_i + two_j + 2)
        self.assertLess(abs(hyperfine_centroid(level)), 1e-12 * scale)

    def test_f_out_of_range(self):
        level = builtin_species().level('lu176/3D1')
        with self.assertRaises(QuantumNumberError):
            hyperfine_energy(level, 10)
        with self.assertRaises(QuantumNumberError):
            g_factor(level, 18)

    def test_lande_g_factor(self):
        level = builtin_species().level('lu175/3D1')
        mu = CONSTANTS.mu_b_hz_per_gauss
        for two_f, expected in ((5, -300e3), (7, 66.7e3), (9, 233.3e3)):
            slope = g_factor(level, two_f) * 1.5 * mu
            electronic = g_factor(level.with_constants(g_i=0.0), two_f) * 1.5 * mu
            self.assertLess(abs(electronic - expected), 0.005 * abs(expected))
            self.assertAlmostEqual(slope - electronic, nuclear_slope(level, two_f, 3), delta=1e-6)

    def test_g_factor_f_zero(self):
        level = toy_level(1, 1, g_j=2.0, g_i=1e-3)
        self.assertEqual(g_factor(level, 0), 0.0)


class ConstantsTests(SimpleTestCase):

    def test_quadrupole_conversion(self):
        self.assertAlmostEqual(CONSTANTS.quad_hz_per_unit / 6.7706e-7, 1.0, places=3)

    def test_bohr_magneton(self):
        self.assertEqual(CONSTANTS.mu_b_hz_per_gauss, 1.399624604e6)
        self.assertTrue(math.isclose(CONSTANTS.mu_b_hz_per_tesla, 1.399624604e10))


class TrapGeometryTests(SimpleTestCase):

    def test_epsilon_bounded(self):
        with self.assertRaises(DomainError):
            TrapGeometry(1e6, epsilon=1.5)

    def test_species_db_is_read_only(self):
        db = SpeciesDb({})
        with self.assertRaises(TypeError):
            db.entries['x'] = None
