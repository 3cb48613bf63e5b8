"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain of an operation (e.g. |z| >= 1)."""


class SeriesError(ValueError):
    """Invalid truncated power-series operation."""


class RegistryError(ValueError):
    """Unknown registry function or inadmissible parameter."""


class NumericalError(ArithmeticError):
    """Quadrature blowup, divergence or a failed internal consistency check."""


class NormInfinite(NumericalError):
    """A weighted norm that the quadrature detected as divergent."""
