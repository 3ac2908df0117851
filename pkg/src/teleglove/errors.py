"""Exception types shared across the teleglove package."""


class TelegloveError(Exception):
    """Base class for all package-specific errors."""


class FilterError(TelegloveError):
    """Raised when a filter receives non-finite input."""


class UndefinedOrientationError(TelegloveError):
    """Raised when tilt angles are requested for a zero acceleration vector."""


class WindowingError(TelegloveError):
    """Raised for invalid window construction or windowing parameters."""


class GenerationError(TelegloveError):
    """Raised for invalid gesture synthesis specs."""


class TrainingError(TelegloveError):
    """Raised when a training set violates the training preconditions."""


class QuantizationError(TelegloveError):
    """Raised when a model cannot be quantized (e.g. empty calibration set)."""


class ModelFormatError(TelegloveError):
    """Raised when a serialized model fails validation; names the bad field."""


class CalibrationError(TelegloveError):
    """Raised when neutral calibration samples are too few or too noisy."""


class SimulationFault(TelegloveError):
    """Raised when the drive simulator receives a non-finite command."""


class PlanningError(TelegloveError):
    """Raised when a trajectory plan violates joint limits; names the joint."""


class ArmBusyError(TelegloveError):
    """Busy-rejection signal: the arm is executing and the command cannot start."""


class ProtocolError(TelegloveError):
    """Raised for malformed or out-of-range wire protocol lines."""


class ConfigError(TelegloveError):
    """Raised for unknown keys or unparseable values in a run config."""
