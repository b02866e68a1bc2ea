from fractions import Fraction

from rest_framework import serializers

from species.serializers import StrictFieldsMixin


class StateRefField(serializers.Field):
    """
    A state written as [level, twoF, twoMF]. Level references stay unresolved
    text here; the file serializer resolves them against a SpeciesDb.
    """

    default_error_messages = {
        'shape': 'Expected [level, twoF, twoMF].',
        'level': 'Level reference must be a non-empty string.',
        'twice': 'twoF and twoMF must be integers.',
    }

    def to_internal_value(self, data):
        if not isinstance(data, (list, tuple)) or len(data) != 3:
            self.fail('shape')
        level, two_f, two_mf = data
        if not isinstance(level, str) or not level:
            self.fail('level')
        if any(isinstance(v, bool) or not isinstance(v, int) for v in (two_f, two_mf)):
            self.fail('twice')
        return level, two_f, two_mf

    def to_representation(self, value):
        return [value.level.ref, value.two_f, value.two_mf]


class WeightField(serializers.Field):
    default_error_messages = {
        'shape': 'Expected [numerator, denominator] integers.',
        'denominator': 'Denominator must be positive.',
    }

    def to_internal_value(self, data):
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            self.fail('shape')
        if any(isinstance(v, bool) or not isinstance(v, int) for v in data):
            self.fail('shape')
        if data[1] <= 0:
            self.fail('denominator')
        return Fraction(data[0], data[1])

    def to_representation(self, value):
        return [value.numerator, value.denominator]


class TransitionEntrySerializer(StrictFieldsMixin, serializers.Serializer):
    ground = StateRefField()
    excited = StateRefField()
    weight = WeightField()


class SchemeSerializer(StrictFieldsMixin, serializers.Serializer):
    name = serializers.CharField(max_length=64)
    delta_m_twice = serializers.IntegerField(source='two_delta_m')
    transitions = TransitionEntrySerializer(many=True, source='components')

    def validate_transitions(self, value):
        if not value:
            raise serializers.ValidationError('At least one transition is required.')
        return value


class SchemeFileSerializer(StrictFieldsMixin, serializers.Serializer):
    species = serializers.CharField(required=False, allow_null=True, default=None)
    schemes = SchemeSerializer(many=True)

    def validate_schemes(self, value):
        names = [scheme['name'] for scheme in value]
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise serializers.ValidationError(f'Duplicate scheme names: {duplicates}')
        return value


class CheckSerializer(serializers.Serializer):
    name = serializers.CharField()
    status = serializers.CharField()
    measured = serializers.FloatField()
    threshold = serializers.FloatField(allow_null=True)
    detail = serializers.DictField(allow_null=True, required=False)


class SchemeReportSerializer(serializers.Serializer):
    scheme = serializers.CharField()
    passed = serializers.BooleanField(read_only=True)
    checks = CheckSerializer(many=True)
