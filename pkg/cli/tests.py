import csv
import io
import json
import re
import tempfile
from pathlib import Path

from django.apps import apps
from django.conf import settings
from django.core.management import CommandError, call_command
from django.test import SimpleTestCase, override_settings

from species.levels import TrapGeometry

from .runconfig import RunConfigSerializer
from .services import random_geometries

STATE_COLUMN = re.compile(r'^lu176/3D1_F\d+_mF-?\d+$')

PARTIAL_SCHEME = {
    'species': 'lu176',
    'schemes': [{
        'name': 'partial',
        'delta_m_twice': 0,
        'transitions': [
            {'ground': ['1S0', 14, 0], 'excited': ['3D1', 12, 0], 'weight': [1, 2]},
            {'ground': ['1S0', 14, 0], 'excited': ['3D1', 14, 0], 'weight': [1, 2]},
        ],
    }],
}

SINGLE_SCHEME = {
    'schemes': [{
        'name': 'single',
        'delta_m_twice': 0,
        'transitions': [
            {'ground': ['lu176/1S0', 14, 0], 'excited': ['lu176/3D1', 16, 0], 'weight': [1, 1]},
        ],
    }],
}


def hfavg(*args):
    out = io.StringIO()
    call_command('hfavg', *args, stdout=out)
    return out.getvalue()


def hfavg_error(test, *args):
    out = io.StringIO()
    with test.assertRaises(CommandError) as raised:
        call_command('hfavg', *args, stdout=out)
    return raised.exception, out.getvalue()


def parse_csv(text):
    return list(csv.reader(io.StringIO(text, newline='')))


def write_file(directory, name, content):
    path = Path(directory) / name
    path.write_text(content if isinstance(content, str) else json.dumps(content), encoding='utf-8')
    return str(path)


class ProjectSettingsTests(SimpleTestCase):

    def test_no_database_or_models(self):
        self.assertEqual(settings.DATABASES, {})
        self.assertEqual(apps.get_models(), [])


class RunConfigTests(SimpleTestCase):

    def test_defaults(self):
        serializer = RunConfigSerializer(data={'action': 'spectrum'})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.save()
        self.assertEqual(config.level, settings.HFAVG['DEFAULT_LEVEL'])
        self.assertEqual(config.scheme, settings.HFAVG['DEFAULT_SCHEME'])
        self.assertEqual(config.b_range, tuple(settings.HFAVG['B_RANGE']))
        self.assertEqual(config.format, 'csv')
        self.assertEqual(config.geometry, TrapGeometry(*settings.HFAVG['DEFAULT_GEOMETRY']))

    def test_fip_uses_search_range(self):
        serializer = RunConfigSerializer(data={'action': 'fip'})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.save()
        self.assertEqual(config.b_range[:2], tuple(settings.HFAVG['FIP_SEARCH_RANGE']))
        self.assertEqual(config.format, 'json')

    def test_invalid_ranges(self):
        for data, field in (
            ({'b_lo': -1.0}, 'b_lo'),
            ({'b_lo': 2.0, 'b_hi': 1.0}, 'b_hi'),
            ({'steps': 1}, 'steps'),
            ({'geom': '1,2'}, 'geom'),
            ({'geom': '1e6,1.5,0,0'}, 'geom'),
        ):
            serializer = RunConfigSerializer(data={'action': 'curve', **data})
            self.assertFalse(serializer.is_valid())
            self.assertIn(field, serializer.errors)

    def test_grid(self):
        serializer = RunConfigSerializer(data={'action': 'curve', 'b_lo': 0.0, 'b_hi': 8000.0, 'steps': 17})
        serializer.is_valid(raise_exception=True)
        grid = serializer.save().fields
        self.assertEqual(grid[0], 0.0)
        self.assertEqual(grid[-1], 8000.0)
        self.assertEqual(grid[1], 500.0)

    def test_random_geometries_are_seeded(self):
        first = random_geometries(1e6, 5, 7)
        self.assertEqual(first, random_geometries(1e6, 5, 7))
        self.assertTrue(all(abs(g.epsilon) <= 1 for g in first))


class SpectrumCommandTests(SimpleTestCase):

    def test_lu176_table(self):
        text = hfavg('spectrum', '--b-lo', '0', '--b-hi', '1', '--steps', '3')
        rows = parse_csv(text)
        self.assertEqual(len(rows), 4)
        header = rows[0]
        self.assertEqual(len(header), 46)
        self.assertEqual(header[0], 'B_gauss')
        self.assertTrue(all(STATE_COLUMN.match(column) for column in header[1:]))
        self.assertIn('lu176/3D1_F16_mF-16', header)
        fields = [float(row[0]) for row in rows[1:]]
        self.assertEqual(fields, [0.0, 0.5, 1.0])
        self.assertTrue(all(len(row) == 46 for row in rows))
        self.assertEqual(text.count('\r\n'), 4)

    def test_deterministic(self):
        args = ('spectrum', '--level', 'lu175/3D1', '--b-hi', '10', '--steps', '4')
        self.assertEqual(hfavg(*args), hfavg(*args))

    def test_stamp_does_not_touch_csv(self):
        args = ('spectrum', '--steps', '2')
        self.assertEqual(hfavg(*args), hfavg(*args, '--stamp'))

    def test_tesla(self):
        rows = parse_csv(hfavg('spectrum', '--b-hi', '1e4', '--steps', '2', '--tesla'))
        self.assertEqual(rows[0][0], 'B_tesla')
        self.assertEqual(float(rows[2][0]), 1.0)

    def test_json(self):
        document = json.loads(hfavg('spectrum', '--steps', '2', '--format', 'json'))
        self.assertEqual(len(document['columns']), 46)
        self.assertEqual(len(document['rows']), 2)

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'spectrum.csv'
            self.assertEqual(hfavg('spectrum', '--steps', '2', '--out', str(path)), '')
            self.assertEqual(len(parse_csv(path.read_text(encoding='utf-8'))), 3)

    def test_species_from_settings(self):
        document = {'species': {'toy': {'gI': -1e-4, 'levels': [
            {'label': 'D', 'twoI': 3, 'twoJ': 2, 'gJ': 1.0, 'A_hf_Hz': 1e8},
        ]}}}
        with tempfile.TemporaryDirectory() as directory:
            path = write_file(directory, 'species.json', document)
            with override_settings(HFAVG=dict(settings.HFAVG, SPECIES_PATH=path)):
                rows = parse_csv(hfavg('spectrum', '--level', 'toy/D', '--steps', '2'))
        self.assertEqual(len(rows[0]), 1 + 12)

    def test_unknown_level(self):
        error, _ = hfavg_error(self, 'spectrum', '--level', 'lu176/3D2')
        self.assertEqual(error.returncode, 2)

    def test_malformed_species_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = write_file(directory, 'broken.json', '{"species": ')
            error, _ = hfavg_error(self, 'spectrum', '--species', path)
        self.assertEqual(error.returncode, 2)
        self.assertIn('line 1', str(error))

    def test_bad_range(self):
        error, _ = hfavg_error(self, 'spectrum', '--b-lo', '2', '--b-hi', '1')
        self.assertEqual(error.returncode, 2)
        self.assertIn('b_hi', str(error))


class CurveCommandTests(SimpleTestCase):

    def test_lu175_average_turns_over_near_fip(self):
        rows = parse_csv(hfavg('curve', '--scheme', 'lu175_fip', '--b-hi', '8000', '--steps', '17'))
        header = rows[0]
        self.assertEqual(header[0], 'B_gauss')
        self.assertEqual(header[-1], 'avg')
        self.assertEqual(len(header), 5)
        self.assertTrue(all(float(v) == 0.0 for v in rows[1][1:]))
        average = [(float(row[-1]), float(row[0])) for row in rows[1:]]
        peak_field = max(average)[1]
        self.assertLessEqual(abs(peak_field - 4750.0), 500.0)
        self.assertNotIn(peak_field, (0.0, 8000.0))

    def test_single_transition(self):
        with tempfile.TemporaryDirectory() as directory:
            path = write_file(directory, 'single.json', SINGLE_SCHEME)
            rows = parse_csv(hfavg('curve', '--scheme', path, '--b-hi', '50', '--steps', '6'))
        for row in rows[1:]:
            self.assertEqual(row[1], row[2])

    def test_unknown_scheme(self):
        error, _ = hfavg_error(self, 'curve', '--scheme', 'lu176_nothing')
        self.assertEqual(error.returncode, 2)


class VerifyCommandTests(SimpleTestCase):

    def test_default_run_passes(self):
        document = json.loads(hfavg('verify'))
        self.assertTrue(document['passed'])
        names = [check['name'] for check in document['checks']]
        for name in ('completeness', 'zeeman_slope', 'quadrupole_residual', 'ground_quadrupole_residual'):
            self.assertIn(name, names)
        self.assertTrue(all(check['status'] == 'pass' for check in document['checks']))
        self.assertNotIn('meta', document)

    def test_builtin_schemes_pass(self):
        for key in ('lu176_forbidden_m0', 'lu175_fip', 'sr87_m0'):
            document = json.loads(hfavg('verify', '--scheme', key, '--geom', '2e6,0.4,0.3,1.1'))
            self.assertTrue(document['passed'], key)

    def test_geometry_sweep(self):
        document = json.loads(hfavg('verify', '--geom-samples', '100'))
        swept = [c for c in document['checks'] if c['name'].startswith('f_sum[') and '#' in c['name']]
        self.assertEqual(len(swept), 100)
        self.assertTrue(all(c['status'] == 'pass' for c in swept))

    def test_incomplete_scheme_fails(self):
        with tempfile.TemporaryDirectory() as directory:
            path = write_file(directory, 'partial.json', PARTIAL_SCHEME)
            error, output = hfavg_error(self, 'verify', '--scheme', path, '--geom', '1e6,0.3,0.4,0.7')
        self.assertEqual(error.returncode, 1)
        checks = {c['name']: c for c in json.loads(output)['checks']}
        self.assertEqual(checks['quadrupole_residual']['status'], 'fail')
        self.assertEqual(checks['completeness']['status'], 'fail')

    def test_sr88_reports_incomplete(self):
        error, output = hfavg_error(self, 'verify', '--scheme', 'sr88_zeeman6', '--geom-samples', '0')
        self.assertEqual(error.returncode, 1)
        checks = {c['name']: c for c in json.loads(output)['checks']}
        self.assertEqual(checks['completeness']['status'], 'fail')
        self.assertEqual(checks['zeeman_slope']['status'], 'pass')
        self.assertEqual(checks['quadrupole_residual']['status'], 'pass')

    def test_csv_rejected(self):
        error, _ = hfavg_error(self, 'verify', '--format', 'csv')
        self.assertEqual(error.returncode, 2)

    def test_stamp(self):
        document = json.loads(hfavg('verify', '--geom-samples', '0', '--stamp'))
        self.assertEqual(document['meta']['version'], settings.HFAVG['VERSION'])
        self.assertIn('generated_at', document['meta'])


class FipCommandTests(SimpleTestCase):

    def test_lu175(self):
        document = json.loads(hfavg('fip', '--scheme', 'lu175_fip'))
        analytic, numeric = document['analytic'], document['numeric']
        self.assertEqual(document['unit'], 'G')
        self.assertAlmostEqual(analytic['B_star'], 4750.2, delta=1.0)
        self.assertAlmostEqual(numeric['B_star'], analytic['B_star'], delta=0.05 * analytic['B_star'])
        self.assertEqual(len(numeric['component_slopes']), 3)
        self.assertLess(abs(numeric['residual_slope']), 1e-3)
        self.assertAlmostEqual(document['discrepancy'], numeric['B_star'] - analytic['B_star'], places=9)

    def test_tesla(self):
        document = json.loads(hfavg('fip', '--scheme', 'lu175_fip', '--tesla'))
        self.assertEqual(document['unit'], 'T')
        self.assertAlmostEqual(document['analytic']['B_star'], 0.47502, delta=1e-4)

    def test_zero_delta_m(self):
        document = json.loads(hfavg('fip', '--scheme', 'lu176_m0'))
        self.assertEqual(document['analytic']['B_star'], 0.0)
        self.assertIsNone(document['numeric'])

    def test_no_sign_change_is_domain_error(self):
        error, _ = hfavg_error(self, 'fip', '--scheme', 'lu175_fip', '--b-lo', '1', '--b-hi', '100')
        self.assertEqual(error.returncode, 3)
