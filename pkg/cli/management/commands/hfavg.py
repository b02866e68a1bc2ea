"""
hfavg <spectrum|curve|verify|fip> [options]

Exit codes: 0 success or all checks passed, 1 verification failure,
2 usage or configuration error, 3 physics-domain error.
"""

from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from django.utils import timezone
from rest_framework.exceptions import ValidationError

from averaging.loader import resolve_scheme
from averaging.serializers import SchemeReportSerializer
from config.exceptions import ConfigurationError, DomainError
from species.loader import flatten_errors, load_species

from cli import services
from cli.renderers import render
from cli.runconfig import ACTIONS, RunConfigSerializer
from cli.serializers import FipResultSerializer, MetaSerializer, TableSerializer

CONFIG_ERROR = 2
DOMAIN_ERROR = 3
VERIFY_FAILED = 1


class Command(BaseCommand):
    help = 'Hyperfine spectra, averaging-scheme verification and field-independent points'

    def add_arguments(self, parser):
        parser.add_argument('action', choices=ACTIONS)
        parser.add_argument('--species', help='Species JSON file merged over the built-ins')
        parser.add_argument('--scheme', help='Built-in scheme key, scheme file, or file#name')
        parser.add_argument('--level', help='Level reference key/label, e.g. lu176/3D1')
        parser.add_argument('--b-lo', type=float, help='Lowest field (G)')
        parser.add_argument('--b-hi', type=float, help='Highest field (G)')
        parser.add_argument('--steps', type=int, help='Number of field points')
        parser.add_argument('--geom', help='Trap geometry A,eps,alpha,beta (V/m², -, rad, rad)')
        parser.add_argument('--format', choices=('csv', 'json'))
        parser.add_argument('--out', help='Output file; standard output when omitted')
        parser.add_argument('--lax', action='store_true', help='Ignore unknown keys in input files')
        parser.add_argument('--tesla', action='store_true', help='Report fields in tesla')
        parser.add_argument('--geom-samples', type=int, help='Random geometries for the sum-rule sweep')
        parser.add_argument('--stamp', action='store_true', help='Add generation metadata to JSON output')

    def handle(self, *args, **options):
        try:
            config = self._config(options)
            document, passed = self._run(config)
        except ValidationError as e:
            raise CommandError('; '.join(flatten_errors(e.detail)), returncode=CONFIG_ERROR) from e
        except ConfigurationError as e:
            raise CommandError(str(e), returncode=CONFIG_ERROR) from e
        except DomainError as e:
            raise CommandError(str(e), returncode=DOMAIN_ERROR) from e

        if config.stamp and config.format == 'json':
            document['meta'] = MetaSerializer({
                'generated_at': timezone.now(),
                'version': settings.HFAVG['VERSION'],
            }).data
        self._write(config, render(document, config.format))
        if not passed:
            raise CommandError('verification failed', returncode=VERIFY_FAILED)

    def _config(self, options):
        serializer = RunConfigSerializer(data={
            key: options.get(key)
            for key in ('action', 'species', 'scheme', 'level', 'b_lo', 'b_hi', 'steps', 'geom',
                        'format', 'out', 'lax', 'tesla', 'geom_samples', 'stamp')
        })
        serializer.is_valid(raise_exception=True)
        return serializer.save()

    def _run(self, config):
        db = load_species(config.species_path, strict=config.strict)
        if config.action == 'spectrum':
            return self._table(config, services.spectrum(config, db)), True

        scheme = resolve_scheme(config.scheme, db, strict=config.strict)
        if config.action == 'curve':
            return self._table(config, services.curve(config, scheme)), True

        if config.action == 'verify':
            report = services.verify(config, scheme)
            return dict(SchemeReportSerializer(report).data), report.passed

        result = services.fip(config, scheme)
        result['unit'] = 'T' if config.tesla else 'G'
        if config.tesla:
            result['analytic'] = services.point_in_tesla(result['analytic'])
            if result['numeric'] is not None:
                result['numeric'] = services.point_in_tesla(result['numeric'])
                result['discrepancy'] = result['numeric'].B_star - result['analytic'].B_star
        return dict(FipResultSerializer(result).data), True

    def _table(self, config, table):
        if config.tesla:
            table = table.in_tesla()
        return dict(TableSerializer(table).data)

    def _write(self, config, text):
        if config.output:
            Path(config.output).write_text(text, encoding='utf-8', newline='')
        else:
            self.stdout.write(text, ending='')
