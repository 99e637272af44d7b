"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Operands have incompatible or invalid dimensions."""


class ParameterError(ValueError):
    """A scalar parameter is outside its admissible range."""


class PreconditionError(ValueError):
    """An operation's structural precondition (symmetry, orthogonality, ...) fails."""


class DomainError(ValueError):
    """A spectral function was applied outside its domain (e.g. log of a non-positive spectrum)."""


class NumericError(RuntimeError):
    """A numerical routine (eigensolver, quadrature, minimizer) failed to converge."""


class ResourceError(RuntimeError):
    """An operation would exceed the configured element budget."""
