"""Exception types shared across the package."""


class StormerKitError(ValueError):
    """Base class for all library errors."""


class DimensionError(StormerKitError):
    """Matrix or block shapes do not conform."""


class DomainError(StormerKitError):
    """Input is outside the mathematical domain of the operation."""


class InputError(StormerKitError):
    """Malformed file or CLI input."""
