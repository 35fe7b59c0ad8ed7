"""Exception types shared across the package."""


class SpinStarError(Exception):
    """Base class for all errors raised by spinstar."""


class StructuralError(SpinStarError, ValueError):
    """An operator does not have the required structure (shape, Hermiticity)."""


class DomainError(SpinStarError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ResourceError(SpinStarError, RuntimeError):
    """A request would exceed the enumeration limits of the brute-force paths."""


class ConfigError(SpinStarError, ValueError):
    """A run configuration is malformed."""
