import json
from pathlib import Path

from rest_framework import serializers

from src.core.exceptions import ArtifactMissing, DataFormatError
from src.core.serializers import MatrixField, StrictSerializer, VectorField, first_error
from src.sica.models import ComponentStatus, SicaConfig, ZGrid, default_z_values


class SicaConfigSerializer(StrictSerializer):
    """``sica`` section of the run configuration."""

    z_values = VectorField(default=default_z_values)
    periods_per_window = serializers.IntegerField(min_value=1, default=2)
    max_outer_iterations = serializers.IntegerField(min_value=1, default=10)
    freq_rel_tol = serializers.FloatField(default=1e-3)
    newton_max_steps = serializers.IntegerField(min_value=1, default=200)
    newton_grad_tol = serializers.FloatField(default=1e-10)
    restarts = serializers.IntegerField(min_value=1, default=8)
    rng_seed = serializers.IntegerField(min_value=0, default=0)

    def validate_z_values(self, value):
        try:
            ZGrid(tuple(value))
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))
        return value

    def validate_freq_rel_tol(self, value):
        if value <= 0:
            raise serializers.ValidationError("Tolerance must be positive.")
        return value

    validate_newton_grad_tol = validate_freq_rel_tol

    def create(self, validated_data):
        data = dict(validated_data)
        return SicaConfig(z_grid=ZGrid(tuple(data.pop("z_values"))), **data)

    def to_representation(self, instance):
        if isinstance(instance, SicaConfig):
            instance = {
                "z_values": list(instance.z_grid.z_values),
                "periods_per_window": instance.periods_per_window,
                "max_outer_iterations": instance.max_outer_iterations,
                "freq_rel_tol": instance.freq_rel_tol,
                "newton_max_steps": instance.newton_max_steps,
                "newton_grad_tol": instance.newton_grad_tol,
                "restarts": instance.restarts,
                "rng_seed": instance.rng_seed,
            }
        return super().to_representation(instance)


class RoundSerializer(serializers.Serializer):
    window_start = serializers.IntegerField()
    window_length = serializers.IntegerField()
    dt = serializers.FloatField()
    frequency = serializers.FloatField()
    phase = serializers.FloatField()
    loss = serializers.FloatField()


class ComponentSerializer(serializers.Serializer):
    status = serializers.ChoiceField(choices=ComponentStatus.choices)
    message = serializers.CharField(allow_blank=True)
    direction = VectorField()
    window_direction = VectorField()
    unmixing_row = VectorField()
    frequency = serializers.FloatField(allow_null=True)
    phase = serializers.FloatField(allow_null=True)
    loss = serializers.FloatField(allow_null=True)
    negentropy = serializers.FloatField(allow_null=True, required=False)
    frequency_history = VectorField()
    loss_history = VectorField()
    rounds = RoundSerializer(many=True)

    def to_representation(self, instance):
        data = super().to_representation(instance)
        if data["loss"] is not None and data["loss"] != data["loss"]:
            data["loss"] = None
        return data


class GridSerializer(serializers.Serializer):
    t0 = serializers.FloatField()
    dt = serializers.FloatField()
    n_samples = serializers.IntegerField(min_value=2)


class WhiteningSerializer(serializers.Serializer):
    means = VectorField()
    whitening_matrix = MatrixField()
    window_start = serializers.IntegerField(min_value=0)
    window_stop = serializers.IntegerField(min_value=0)


class SolutionSerializer(serializers.Serializer):
    method = serializers.ChoiceField(choices=("sica", "ica"))
    grid = GridSerializer()
    whitening = WhiteningSerializer()
    components = ComponentSerializer(many=True)


def solution_to_dict(solution):
    reference = solution.whitening_used
    return SolutionSerializer(
        {
            "method": solution.method,
            "grid": reference.grid,
            "whitening": {
                "means": reference.means,
                "whitening_matrix": reference.whitening_matrix,
                "window_start": reference.window.start,
                "window_stop": reference.window.stop,
            },
            "components": solution.components,
        }
    ).data


def load_solution(path):
    """Validated contents of a solution JSON file (plain dicts and lists)."""
    path = Path(path)
    if not path.is_file():
        raise ArtifactMissing(f"{path}: solution file not found")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}:{exc.lineno}: {exc.msg}") from None
    serializer = SolutionSerializer(data=payload)
    if not serializer.is_valid():
        raise DataFormatError(f"{path}: {first_error(serializer.errors)}")
    return serializer.validated_data
