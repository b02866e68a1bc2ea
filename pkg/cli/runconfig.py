"""
Run configuration for the hfavg command, validated from the parsed command
line options with a DRF serializer.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from django.conf import settings
from rest_framework import serializers

from config.exceptions import DomainError
from species.levels import TrapGeometry

ACTIONS = ('spectrum', 'curve', 'verify', 'fip')
CSV, JSON = 'csv', 'json'
TABLE_ACTIONS = ('spectrum', 'curve')


@dataclass(frozen=True)
class RunConfig:
    action: str
    species_path: Optional[str]
    scheme: str
    level: str
    b_range: Tuple[float, float, int]  # lo (G), hi (G), steps
    geometry: TrapGeometry
    output: Optional[str]  # None writes to standard output
    format: str
    strict: bool = True
    tesla: bool = False
    geom_samples: int = 0
    stamp: bool = False

    @property
    def fields(self):
        """The B grid in gauss, strictly increasing"""
        lo, hi, steps = self.b_range
        return np.linspace(lo, hi, steps).tolist()


class GeometryField(serializers.CharField):
    """'A,eps,alpha,beta' with A in V/m² and angles in radians"""

    default_error_messages = {
        'shape': 'Expected four comma-separated numbers A,eps,alpha,beta.',
        'domain': '{message}',
    }

    def to_internal_value(self, data):
        if isinstance(data, (list, tuple)):
            values = data
        else:
            values = super().to_internal_value(data).split(',')
        try:
            numbers = [float(v) for v in values]
        except (TypeError, ValueError):
            self.fail('shape')
        if len(numbers) != 4 or not all(math.isfinite(n) for n in numbers):
            self.fail('shape')
        try:
            return TrapGeometry(*numbers)
        except DomainError as e:
            self.fail('domain', message=str(e))

    def to_representation(self, value):
        return ','.join(repr(v) for v in (value.a_grad, value.epsilon, value.alpha, value.beta))


class RunConfigSerializer(serializers.Serializer):
    action = serializers.ChoiceField(choices=ACTIONS)
    species = serializers.CharField(required=False, allow_null=True, default=None)
    scheme = serializers.CharField(required=False, allow_null=True, default=None)
    level = serializers.CharField(required=False, allow_null=True, default=None)
    b_lo = serializers.FloatField(required=False, allow_null=True, default=None)
    b_hi = serializers.FloatField(required=False, allow_null=True, default=None)
    steps = serializers.IntegerField(required=False, allow_null=True, default=None)
    geom = GeometryField(required=False, allow_null=True, default=None)
    format = serializers.ChoiceField(choices=(CSV, JSON), required=False, allow_null=True, default=None)
    out = serializers.CharField(required=False, allow_null=True, default=None)
    lax = serializers.BooleanField(default=False)
    tesla = serializers.BooleanField(default=False)
    geom_samples = serializers.IntegerField(min_value=0, required=False, allow_null=True, default=None)
    stamp = serializers.BooleanField(default=False)

    def validate(self, attrs):
        config = settings.HFAVG
        action = attrs['action']
        if action == 'fip':
            default_lo, default_hi = config['FIP_SEARCH_RANGE']
            default_steps = config['FIP_SCAN_STEPS']
        else:
            default_lo, default_hi, default_steps = config['B_RANGE']
        lo = default_lo if attrs['b_lo'] is None else attrs['b_lo']
        hi = default_hi if attrs['b_hi'] is None else attrs['b_hi']
        steps = default_steps if attrs['steps'] is None else attrs['steps']
        errors = {}
        if not (math.isfinite(lo) and math.isfinite(hi)):
            errors['b_lo'] = 'Field bounds must be finite.'
        elif lo < 0:
            errors['b_lo'] = 'Must be >= 0.'
        elif lo >= hi:
            errors['b_hi'] = 'Must be greater than --b-lo.'
        if steps < 2:
            errors['steps'] = 'Must be >= 2.'
        fmt = attrs['format'] or (CSV if action in TABLE_ACTIONS else JSON)
        if action not in TABLE_ACTIONS and fmt != JSON:
            errors['format'] = f'{action} writes JSON only.'
        if errors:
            raise serializers.ValidationError(errors)
        attrs['b_range'] = (lo, hi, steps)
        attrs['resolved_format'] = fmt
        return attrs

    def create(self, validated_data):
        config = settings.HFAVG
        samples = validated_data['geom_samples']
        return RunConfig(
            action=validated_data['action'],
            species_path=validated_data['species'],
            scheme=validated_data['scheme'] or config['DEFAULT_SCHEME'],
            level=validated_data['level'] or config['DEFAULT_LEVEL'],
            b_range=validated_data['b_range'],
            geometry=validated_data['geom'] or TrapGeometry(*config['DEFAULT_GEOMETRY']),
            output=validated_data['out'],
            format=validated_data['resolved_format'],
            strict=not validated_data['lax'],
            tesla=validated_data['tesla'],
            geom_samples=config['GEOMETRY_SAMPLES'] if samples is None else samples,
            stamp=validated_data['stamp'],
        )
