import json

import numpy as np
from rest_framework import serializers


class StrictSerializer(serializers.Serializer):
    """Serializer that rejects keys it does not declare."""

    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError(
                    {key: ["Unknown key."] for key in unknown}
                )
        return super().to_internal_value(data)


class VectorField(serializers.ListField):
    """List of floats; accepts and emits numpy arrays."""

    child = serializers.FloatField()

    def to_representation(self, data):
        return [float(value) for value in np.ravel(data)]


class MatrixField(serializers.ListField):
    child = VectorField()

    def to_representation(self, data):
        return [[float(value) for value in row] for row in np.atleast_2d(data)]


def dump_json(data):
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def first_error(errors, prefix=""):
    """Flatten DRF ``serializer.errors`` into ``"path: message"``."""
    if isinstance(errors, dict):
        for key, value in errors.items():
            path = f"{prefix}.{key}" if prefix else str(key)
            return first_error(value, path)
    if isinstance(errors, list) and errors:
        if isinstance(errors[0], (dict, list)):
            return first_error(errors[0], prefix)
        return f"{prefix}: {errors[0]}" if prefix else str(errors[0])
    return f"{prefix}: {errors}" if prefix else str(errors)
