"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Operands have incompatible or unexpected dimensions."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class NumericError(RuntimeError):
    """An iterative numerical procedure failed (non-convergence, singularity)."""
