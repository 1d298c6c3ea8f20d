"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(ValueError):
    """A tolerance, grid or run configuration is invalid."""


class ConvergenceError(RuntimeError):
    """A numerical routine did not converge to the requested accuracy."""
