"""Exception types raised across the package."""


class ModrecError(Exception):
    """Base class for all package errors."""


class EmptyInputError(ModrecError, ValueError):
    pass


class DomainError(ModrecError, ValueError):
    """A value lies outside the alphabet or range an operation accepts."""


class InvalidMixError(ModrecError, ValueError):
    pass


class DegenerateSignalError(ModrecError, ValueError):
    """Zero-power or otherwise unusable input."""


class InsufficientSamplesError(ModrecError, ValueError):
    pass


class DimensionMismatchError(ModrecError, ValueError):
    pass


class TrainingError(ModrecError, ValueError):
    pass
