"""Run configuration: one JSON document, validated section by section."""

import hashlib
import json
import math
from pathlib import Path

from django.conf import settings
from rest_framework import serializers

from src.baseline.serializers import NegentropyConfigSerializer
from src.becsim.serializers import (
    ModesSerializer,
    NoiseSerializer,
    PointField,
    SpatialGridSerializer,
    TimeGridSerializer,
    TrapSerializer,
)
from src.core.exceptions import ArtifactMissing, ConfigInvalid
from src.core.serializers import StrictSerializer, dump_json, first_error
from src.pipeline.models import RunConfig
from src.sica.serializers import SicaConfigSerializer

SEEDED_SECTIONS = ("noise", "sica", "negentropy")


class RunConfigSerializer(StrictSerializer):
    trap = TrapSerializer()
    modes = ModesSerializer()
    noise = NoiseSerializer()
    spatial_grid = SpatialGridSerializer()
    time_grid = TimeGridSerializer()
    sica = SicaConfigSerializer()
    negentropy = NegentropyConfigSerializer()
    detectors = serializers.ListField(child=PointField(), default=list)
    output_dir = serializers.CharField(default=None, allow_null=True)

    def to_internal_value(self, data):
        if isinstance(data, dict):
            # Missing sections validate as empty objects so their defaults apply.
            data = {key: value for key, value in data.items()}
            for name, field in self.fields.items():
                if isinstance(field, serializers.Serializer):
                    data.setdefault(name, {})
        return super().to_internal_value(data)

    def create(self, validated_data):
        sections = self.fields
        trap = sections["trap"].create(validated_data["trap"])
        output_dir = validated_data["output_dir"] or settings.MODES_OUTPUT_DIR
        return RunConfig(
            trap=trap,
            modes=sections["modes"].create(validated_data["modes"]),
            noise=sections["noise"].create(validated_data["noise"]),
            spatial_grid=sections["spatial_grid"].build(validated_data["spatial_grid"], trap),
            time_grid=sections["time_grid"].create(validated_data["time_grid"]),
            sica=sections["sica"].create(validated_data["sica"]),
            negentropy=sections["negentropy"].create(validated_data["negentropy"]),
            detectors=tuple(tuple(point) for point in validated_data["detectors"]),
            output_dir=Path(output_dir),
            digest=config_digest(validated_data),
        )


def config_digest(validated_data):
    """SHA-256 of the canonical JSON form of a validated configuration.

    The output directory is left out so runs written elsewhere hash the same.
    """
    content = {key: value for key, value in validated_data.items() if key != "output_dir"}
    canonical = dump_json(json.loads(json.dumps(content)))
    return hashlib.sha256(canonical.encode()).hexdigest()


def parse_override(text):
    """``section.key=<json>`` into ``(["section", "key"], value)``."""
    path, separator, raw = text.partition("=")
    keys = [key.strip() for key in path.split(".")]
    if not separator or not all(keys):
        raise ConfigInvalid(f"override {text!r} is not of the form section.key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return keys, value


def apply_override(document, keys, value):
    node = document
    for key in keys[:-1]:
        child = node.setdefault(key, {})
        if not isinstance(child, dict):
            raise ConfigInvalid(f"cannot set {'.'.join(keys)}: {key} is not a section")
        node = child
    node[keys[-1]] = value


def read_config_document(path):
    if path is None:
        return {}
    path = Path(path)
    if not path.is_file():
        raise ArtifactMissing(f"{path}: config file not found")
    try:
        document = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"{path}:{exc.lineno}: {exc.msg}") from None
    if not isinstance(document, dict):
        raise ConfigInvalid(f"{path}: config must be a JSON object")
    return document


def load_run_config(path=None, seed=None, output_dir=None, overrides=()):
    """Validated :class:`RunConfig` from a file plus command-line overrides.

    ``seed`` replaces every rng seed; without it, seeds the document leaves out
    come from ``MODES_DEFAULT_SEED``.
    """
    document = read_config_document(path)
    for text in overrides:
        apply_override(document, *parse_override(text))
    for section in SEEDED_SECTIONS:
        node = document.setdefault(section, {})
        if not isinstance(node, dict):
            continue
        if seed is not None:
            node["rng_seed"] = seed
        else:
            node.setdefault("rng_seed", settings.MODES_DEFAULT_SEED)
    if output_dir is not None:
        document["output_dir"] = str(output_dir)

    serializer = RunConfigSerializer(data=document)
    if not serializer.is_valid():
        raise ConfigInvalid(first_error(serializer.errors))
    return serializer.save()


def parse_float_list(text, option):
    """Comma-separated finite numbers given to a command-line ``option``."""
    try:
        values = [float(value) for value in text.split(",") if value.strip()]
    except ValueError:
        raise ConfigInvalid(f"{option} expects comma-separated numbers, got {text!r}") from None
    if not values or not all(math.isfinite(value) for value in values):
        raise ConfigInvalid(f"{option} expects finite numbers, got {text!r}")
    return values
