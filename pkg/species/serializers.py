from rest_framework import serializers

from angular.symbols import AngularMomentum

from .levels import FinePartner, Isotope, LevelSpec, SpeciesDb


class StrictFieldsMixin:
    """
    Rejects keys the serializer does not declare, unless the serializer
    context carries strict=False (the CLI's --lax).
    """

    def to_internal_value(self, data):
        if self.context.get('strict', True) and isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError(
                    {key: ['Unknown field.'] for key in unknown}
                )
        return super().to_internal_value(data)


class FinePartnerSerializer(StrictFieldsMixin, serializers.Serializer):
    omega_fs_rad_s = serializers.FloatField(source='omega_fs')
    gL = serializers.FloatField(source='g_l')
    gS = serializers.FloatField(source='g_s')


class LevelSerializer(StrictFieldsMixin, serializers.Serializer):
    label = serializers.CharField(max_length=32)
    twoI = serializers.IntegerField(source='two_i', min_value=0)
    twoJ = serializers.IntegerField(source='two_j', min_value=0)
    gJ = serializers.FloatField(source='g_j')
    A_hf_Hz = serializers.FloatField(source='a_hf', default=0.0)
    B_hf_Hz = serializers.FloatField(source='b_hf', default=0.0)
    theta_q_ea02 = serializers.FloatField(source='theta_q', default=0.0)
    fs_partner = FinePartnerSerializer(allow_null=True, required=False, default=None)
    provenance = serializers.CharField(allow_null=True, required=False, default=None)

    def validate(self, attrs):
        two_i, two_j = attrs['two_i'], attrs['two_j']
        if attrs['b_hf'] and (two_i < 2 or two_j < 2):
            raise serializers.ValidationError(
                {'B_hf_Hz': 'must be 0 when I < 1 or J < 1.'}
            )
        if attrs['theta_q'] and two_j < 2:
            raise serializers.ValidationError(
                {'theta_q_ea02': 'must be 0 when J < 1.'}
            )
        return attrs


class IsotopeSerializer(StrictFieldsMixin, serializers.Serializer):
    gI = serializers.FloatField(source='g_i')
    levels = LevelSerializer(many=True)

    def validate_levels(self, value):
        labels = [level['label'] for level in value]
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise serializers.ValidationError(f'Duplicate level labels: {duplicates}')
        if not value:
            raise serializers.ValidationError('At least one level is required.')
        return value


class SpeciesFileSerializer(StrictFieldsMixin, serializers.Serializer):
    species = serializers.DictField(child=IsotopeSerializer(), source='entries')

    def create(self, validated_data):
        entries = {}
        for key, isotope in validated_data['entries'].items():
            levels = tuple(
                _level_from(key, isotope['g_i'], level) for level in isotope['levels']
            )
            entries[key] = Isotope(key=key, g_i=isotope['g_i'], levels=levels)
        return SpeciesDb(entries)


def _level_from(key, g_i, data) -> LevelSpec:
    partner = data.get('fs_partner')
    return LevelSpec(
        key=key,
        label=data['label'],
        nuclear_spin=AngularMomentum(data['two_i']),
        j=AngularMomentum(data['two_j']),
        g_j=data['g_j'],
        g_i=g_i,
        a_hf=data['a_hf'],
        b_hf=data['b_hf'],
        theta_q=data['theta_q'],
        fs_partner=FinePartner(**partner) if partner else None,
        provenance=data.get('provenance'),
    )
