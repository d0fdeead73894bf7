import hashlib
import logging
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError, CommandParser
from rest_framework import serializers

from src.core.exceptions import ModeSeparationError
from src.core.serializers import dump_json
from src.pipeline.serializers import load_run_config

logger = logging.getLogger(__name__)

USAGE_EXIT_CODE = 1
IO_EXIT_CODE = 4
MANIFEST_FILE = "manifest.json"


class UsageErrorParser(CommandParser):
    """Argument errors end the process with exit code 1."""

    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(USAGE_EXIT_CODE, f"USAGE_ERROR: {message}\n")
        raise CommandError(f"USAGE_ERROR: {message}", returncode=USAGE_EXIT_CODE)


class ArtifactSerializer(serializers.Serializer):
    path = serializers.CharField()
    sha256 = serializers.CharField()


class ManifestSerializer(serializers.Serializer):
    command = serializers.CharField()
    config_sha256 = serializers.CharField()
    artifacts = ArtifactSerializer(many=True)


def file_digest(path):
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(directory, command, config_digest, paths):
    directory = Path(directory)
    artifacts = [
        {"path": Path(path).relative_to(directory).as_posix(), "sha256": file_digest(path)}
        for path in sorted(paths, key=lambda p: Path(p).as_posix())
    ]
    manifest = ManifestSerializer(
        {"command": command, "config_sha256": config_digest, "artifacts": artifacts}
    ).data
    path = directory / MANIFEST_FILE
    path.write_text(dump_json(manifest))
    return path


class PipelineCommand(BaseCommand):
    """Shared flags, config loading and error reporting of the pipeline commands.

    Subclasses implement :meth:`run` and return the paths they wrote below
    ``self.output_dir``.
    """

    name = ""

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.__class__ = UsageErrorParser
        return parser

    def add_arguments(self, parser):
        parser.add_argument("--config", help="JSON run configuration")
        parser.add_argument("--seed", type=int, help="Seed for every random generator")
        parser.add_argument("--out", help="Output directory")
        parser.add_argument(
            "--set",
            action="append",
            default=[],
            dest="overrides",
            metavar="SECTION.KEY=JSON",
            help="Override one configuration key",
        )

    def handle(self, *args, **options):
        try:
            self.config = load_run_config(
                path=options["config"],
                seed=options["seed"],
                output_dir=options["out"],
                overrides=options["overrides"],
            )
            self.output_dir = self.config.output_dir / self.name
            self.output_dir.mkdir(parents=True, exist_ok=True)
            written = self.run(**options)
            manifest = write_manifest(self.output_dir, self.name, self.config.digest, written)
        except ModeSeparationError as exc:
            logger.error("%s failed: %s", self.name, exc.as_line())
            raise CommandError(exc.as_line(), returncode=exc.exit_code) from exc
        except OSError as exc:
            raise CommandError(f"IO_ERROR: {exc}", returncode=IO_EXIT_CODE) from exc
        logger.info("%s wrote %d artifacts to %s", self.name, len(written), self.output_dir)
        self.stdout.write(self.style.SUCCESS(f"Manifest: {manifest}"))

    def run(self, **options):
        raise NotImplementedError
