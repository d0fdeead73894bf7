"""Errors raised across the separation pipeline.

Every error carries a short machine code and the exit code the management
commands report for it.
"""


class ModeSeparationError(Exception):
    code = "NUMERIC_FAILURE"
    exit_code = 3

    def as_line(self):
        """Single-line form used on the command line."""
        detail = " ".join(str(self).split())
        return f"{self.code}: {detail}" if detail else self.code


# Configuration


class ConfigInvalid(ModeSeparationError):
    code = "CONFIG_INVALID"
    exit_code = 2


class InvalidParameter(ConfigInvalid, ValueError):
    """A domain type was constructed with values breaking its invariants."""

    code = "INVALID_PARAMETER"


# Numeric failures


class RankDeficient(ModeSeparationError):
    code = "RANK_DEFICIENT"


class WindowTooShort(ModeSeparationError):
    code = "WINDOW_TOO_SHORT"


class EmptyWindow(ModeSeparationError):
    code = "EMPTY_WINDOW"


class DimensionMismatch(ModeSeparationError):
    code = "DIMENSION_MISMATCH"


class NoConvergence(ModeSeparationError):
    code = "NO_CONVERGENCE"


class NoOscillation(ModeSeparationError):
    code = "NO_OSCILLATION"


class FitDiverged(ModeSeparationError):
    code = "FIT_DIVERGED"


class SignalTooShort(ModeSeparationError):
    code = "SIGNAL_TOO_SHORT"


class BracketingFailed(ModeSeparationError):
    code = "BRACKETING_FAILED"


class PointOutsideGrid(ModeSeparationError):
    code = "POINT_OUTSIDE_GRID"


class IllConditionedBasis(ModeSeparationError):
    code = "ILL_CONDITIONED_BASIS"


class EmptyMask(ModeSeparationError):
    code = "EMPTY_MASK"


# Data and artifacts


class DataFormatError(ModeSeparationError):
    code = "IO_ERROR"
    exit_code = 4


class UngriddedData(DataFormatError):
    code = "UNGRIDDED_DATA"


class NonFiniteSample(DataFormatError):
    code = "NON_FINITE_SAMPLE"


class ArtifactMissing(DataFormatError):
    code = "ARTIFACT_MISSING"
