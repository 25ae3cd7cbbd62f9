"""Exception types raised by the library."""


class ModeswitchError(Exception):
    """Base class for all library errors."""


class NonFiniteState(ModeswitchError):
    """A state or costate sample left the finite floating-point range."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class OutOfRange(ModeswitchError):
    """A cell set or insertion window does not fit inside the grid."""


class BadBlocks(ModeswitchError):
    """Block list durations are negative or do not sum to the horizon."""


class NotDescendable(ModeswitchError):
    """Level set requested for a profile whose optimality value is >= 0."""


class EmptySelection(ModeswitchError):
    """Subset selection produced no cells (should be unreachable)."""


class StepSizeUnderflow(ModeswitchError):
    """Backtracking exhausted without finding an acceptable descent step."""

    def __init__(self, message, backtracks=None):
        super().__init__(message)
        self.backtracks = backtracks


class GradientVanished(ModeswitchError):
    """Gradient norm fell below the resolution of the line search."""


class BudgetExceeded(ModeswitchError):
    """Exhaustive enumeration would exceed the simulation budget."""


class BadInterval(ModeswitchError):
    """Probe interval is not strictly inside a constant-mode block."""


class DimensionMismatch(ModeswitchError):
    """System matrices or vectors have inconsistent shapes."""


class ConfigError(ModeswitchError):
    """Run configuration is malformed; `field` names the offending key."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class LengthMismatch(ModeswitchError):
    """A serialized schedule does not match the configured grid."""


class MissingColumn(ModeswitchError):
    """A CSV artifact lacks a required column."""


class MissingFile(ModeswitchError):
    """A required artifact file is absent."""
