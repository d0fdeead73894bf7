from rest_framework import serializers

from src.core.serializers import VectorField


class ModeMapMetaSerializer(serializers.Serializer):
    """``modemap.json`` written next to the binary maps."""

    half_width = serializers.FloatField()
    n_points = serializers.IntegerField(min_value=3)
    frequencies = VectorField()
    array_format = serializers.CharField()
    arrays = serializers.DictField(child=serializers.CharField())
    symmetry_scores = serializers.DictField(child=serializers.FloatField())
    clipped_points = serializers.IntegerField(min_value=0)
