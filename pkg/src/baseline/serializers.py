from rest_framework import serializers

from src.baseline.models import Contrast, NegentropyConfig
from src.core.serializers import StrictSerializer


class NegentropyConfigSerializer(StrictSerializer):
    """``negentropy`` section of the run configuration."""

    contrast = serializers.ChoiceField(choices=Contrast.choices, default=Contrast.LOG_COSH)
    max_iterations = serializers.IntegerField(min_value=1, default=500)
    tol = serializers.FloatField(default=1e-8)
    restarts = serializers.IntegerField(min_value=1, default=8)
    rng_seed = serializers.IntegerField(min_value=0, default=0)

    def validate_tol(self, value):
        if value <= 0:
            raise serializers.ValidationError("Tolerance must be positive.")
        return value

    def create(self, validated_data):
        return NegentropyConfig(**validated_data)
