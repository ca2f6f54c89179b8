"""Exception types shared across the package.

Every contract violation raises a dedicated class so callers (and the
service layer) can map failures without parsing messages.
"""


class MemoryModelError(Exception):
    """Base class for all errors raised by this package."""


# -- spectrum ---------------------------------------------------------------

class NonPositiveVolumeError(MemoryModelError, ValueError):
    pass


class ZeroModeCountError(MemoryModelError, ValueError):
    pass


class NonPositiveMomentumError(MemoryModelError, ValueError):
    pass


class NegativeTimeError(MemoryModelError, ValueError):
    pass


class NonPositiveFrequencyError(MemoryModelError, ValueError):
    pass


# -- condensate -------------------------------------------------------------

class NegativeOccupationError(MemoryModelError, ValueError):
    pass


class NegativeSqueezeError(MemoryModelError, ValueError):
    pass


class GridMismatchError(MemoryModelError, ValueError):
    pass


class NonPositiveBetaError(MemoryModelError, ValueError):
    pass


# -- dynamics ---------------------------------------------------------------

class ZeroDampingFiniteLifetimeError(MemoryModelError, ValueError):
    pass


class NonPositiveStepError(MemoryModelError, ValueError):
    pass


class NonPositiveHorizonError(MemoryModelError, ValueError):
    pass


class NonPositiveTimeStepError(MemoryModelError, ValueError):
    """Raised when an evolution step would not move forward in time."""


class RefreshForgottenError(MemoryModelError):
    """Raised when refreshing a forgotten memory: its code is lost."""


# -- memory bank ------------------------------------------------------------

class ClockRegressionError(MemoryModelError, ValueError):
    pass


class UnknownCodeError(MemoryModelError, LookupError):
    pass


class StartForgottenError(MemoryModelError):
    pass


class DuplicateCodeError(MemoryModelError, ValueError):
    pass


# -- Fock validator ---------------------------------------------------------

class TruncationTooSmallError(MemoryModelError, ValueError):
    """Raised when the truncated basis leaks too much norm for the requested state."""


# -- scenario configs -------------------------------------------------------

class ScenarioError(MemoryModelError):
    """Base class for scenario configuration errors."""


class ScenarioParseError(ScenarioError):
    """Malformed config text. Carries the 1-based source line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ScenarioValidationError(ScenarioError):
    """Well-formed config with an invalid value. Carries the offending field."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


class UnknownKeyError(ScenarioValidationError):
    def __init__(self, line: int, key: str):
        super().__init__(key, f"unknown key (line {line})")
        self.line = line


class ScenarioEventError(MemoryModelError):
    """A module error raised while applying a timeline event."""

    def __init__(self, event_index: int, cause: Exception):
        super().__init__(f"event {event_index}: {cause}")
        self.event_index = event_index
        self.cause = cause
