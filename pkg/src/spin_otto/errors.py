"""Error hierarchy.

Every error carries a stable machine-readable ``code`` next to the human
message so the CLI can emit ``{"code": ..., "message": ...}`` details.
"""

from __future__ import annotations

from typing import Dict


class SpinOttoError(Exception):
    code = "spin_otto_error"

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message

    @property
    def detail(self) -> Dict[str, str]:
        return {"code": self.code, "message": self.message}


class DegenerateSpectrum(SpinOttoError):
    code = "degenerate_spectrum"


class NonPositiveTemperature(SpinOttoError):
    code = "non_positive_temperature"


class DimensionMismatch(SpinOttoError):
    code = "dimension_mismatch"


class InvalidState(SpinOttoError):
    code = "invalid_state"


class StepsTooFew(SpinOttoError):
    code = "steps_too_few"


class StepSizeTooLarge(SpinOttoError):
    code = "step_size_too_large"


class MicroreversibilityViolation(SpinOttoError):
    code = "microreversibility_violation"


class ZeroHeat(SpinOttoError):
    code = "zero_heat"


class ZeroDuration(SpinOttoError):
    code = "zero_duration"


class InvalidFields(SpinOttoError):
    code = "invalid_fields"


class NonCyclicState(SpinOttoError):
    code = "non_cyclic_state"


class UnknownPreset(SpinOttoError):
    code = "unknown_preset"


class InvalidOverride(SpinOttoError):
    code = "invalid_override"


class InvalidSweep(SpinOttoError):
    code = "invalid_sweep"


class ConfigIoError(SpinOttoError):
    code = "config_io_error"
