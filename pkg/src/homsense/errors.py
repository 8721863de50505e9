"""Exception types shared across the package."""


class HomsenseError(Exception):
    """Base class for all package-specific errors."""


class ValidityError(HomsenseError):
    """Input is outside the small-angle / paraxial validity range."""


class RegimeError(HomsenseError):
    """A closed-form expression was evaluated outside its regime of validity."""


class NumericError(HomsenseError):
    """A numeric evaluation produced a non-finite value.

    Carries the offending location when known (``location`` attribute).
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class PostSelectionError(HomsenseError):
    """Post-selected state is (numerically) orthogonal to the input state."""


class SingularInformationError(HomsenseError):
    """Fisher information is singular (outcome probability at 0 or 1)."""


class ConfigError(HomsenseError):
    """Scenario configuration is malformed or contains unknown fields."""
