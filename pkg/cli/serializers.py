from rest_framework import serializers


class TableSerializer(serializers.Serializer):
    columns = serializers.ListField(child=serializers.CharField())
    rows = serializers.ListField(child=serializers.ListField(child=serializers.FloatField()))


class FieldIndependentPointSerializer(serializers.Serializer):
    B_star = serializers.FloatField()
    curvature = serializers.FloatField()
    method = serializers.CharField()
    bracket = serializers.ListField(child=serializers.FloatField(), allow_null=True)
    component_slopes = serializers.DictField(child=serializers.FloatField())
    residual_slope = serializers.FloatField()


class FipResultSerializer(serializers.Serializer):
    scheme = serializers.CharField()
    unit = serializers.CharField()
    analytic = FieldIndependentPointSerializer()
    numeric = FieldIndependentPointSerializer(allow_null=True)
    discrepancy = serializers.FloatField(allow_null=True)


class MetaSerializer(serializers.Serializer):
    generated_at = serializers.DateTimeField()
    version = serializers.CharField()
