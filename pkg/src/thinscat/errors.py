"""Exception types shared across the package."""


class ThinscatError(Exception):
    """Base class for all package-specific errors."""


class GeometryError(ThinscatError, ValueError):
    """Invalid curve definition or evaluation outside the parameter range."""


class MediumError(ThinscatError, ValueError):
    """Non-physical medium or inclusion parameters."""


class ResonanceError(ThinscatError):
    """The point-interaction system is singular or nearly singular.

    Raised by the multiple-scattering forward solver when the coupling
    matrix cannot be inverted reliably.  Carries the estimated condition
    number so callers can report how close to resonance the system is.
    """

    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class DatasetError(ThinscatError, ValueError):
    """A dataset directory is missing files or fails to parse."""


class ScenarioError(ThinscatError, ValueError):
    """A scenario document is malformed or fails validation."""
