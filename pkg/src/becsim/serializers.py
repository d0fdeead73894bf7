import math

from rest_framework import serializers

from src.becsim.models import ModeSpec, NoiseSpec, SpatialGrid, TrapParams
from src.core.serializers import StrictSerializer, VectorField
from src.signals.models import TimeGrid


def _positive(value):
    if not math.isfinite(value) or value <= 0:
        raise serializers.ValidationError("Must be positive.")
    return value


class TrapSerializer(StrictSerializer):
    m = serializers.FloatField(default=1.0, validators=[_positive])
    omega_perp = serializers.FloatField(default=1.0, validators=[_positive])
    g = serializers.FloatField(default=10.0, validators=[_positive])
    n_atoms = serializers.FloatField(default=1000.0, validators=[_positive])

    def create(self, validated_data):
        return TrapParams(**validated_data)


class ModesSerializer(StrictSerializer):
    amplitudes = VectorField(min_length=3, max_length=3, default=lambda: [0.2, 0.2, 0.2])
    frequencies = VectorField(
        min_length=3, max_length=3, default=lambda: [1.0, math.sqrt(2.0), 2.0]
    )

    def validate_frequencies(self, value):
        if any(not math.isfinite(w) or w <= 0 for w in value):
            raise serializers.ValidationError("Frequencies must be positive.")
        if len(set(value)) != len(value):
            raise serializers.ValidationError("Frequencies must be distinct.")
        return value

    def create(self, validated_data):
        return ModeSpec(
            amplitudes=tuple(validated_data["amplitudes"]),
            frequencies=tuple(validated_data["frequencies"]),
        )


class NoiseSerializer(StrictSerializer):
    amplitude = serializers.FloatField(default=0.1, min_value=0.0)
    rng_seed = serializers.IntegerField(default=0, min_value=0)

    def create(self, validated_data):
        return NoiseSpec(**validated_data)


class SpatialGridSerializer(StrictSerializer):
    """Grid section; ``half_width`` defaults to ``scale`` times the Thomas-Fermi radius."""

    n_points = serializers.IntegerField(default=101, min_value=3)
    half_width = serializers.FloatField(default=None, allow_null=True, validators=[_positive])
    scale = serializers.FloatField(default=1.3, validators=[_positive])

    def validate_n_points(self, value):
        if value % 2 == 0:
            raise serializers.ValidationError("Must be odd so the origin is a grid node.")
        return value

    def build(self, data, trap):
        if data["half_width"] is None:
            return SpatialGrid.for_trap(trap, n_points=data["n_points"], scale=data["scale"])
        return SpatialGrid(half_width=data["half_width"], n_points=data["n_points"])


class TimeGridSerializer(StrictSerializer):
    t0 = serializers.FloatField(default=0.0)
    dt = serializers.FloatField(default=4.0 * math.pi / 400, validators=[_positive])
    n_samples = serializers.IntegerField(default=400, min_value=2)

    def create(self, validated_data):
        return TimeGrid(**validated_data)


class PointField(VectorField):
    def __init__(self, **kwargs):
        super().__init__(min_length=2, max_length=2, **kwargs)


class MovieMetaSerializer(serializers.Serializer):
    """``meta.json`` of a saved movie."""

    trap = TrapSerializer()
    modes = ModesSerializer()
    noise = NoiseSerializer()
    half_width = serializers.FloatField()
    n_points = serializers.IntegerField(min_value=3)
    time_grid = TimeGridSerializer()
    chemical_potentials = VectorField()
    frame_format = serializers.CharField()
    frame_files = serializers.ListField(child=serializers.CharField())
