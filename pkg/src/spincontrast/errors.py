"""Exception types shared across the package."""


class BlochViolationError(ValueError):
    """Bloch vector lies outside the unit ball, so no physical state exists."""


class SpectrumViolationError(ValueError):
    """An outcome value falls outside the measured observable's eigenvalue set."""


class NumericFailureError(ArithmeticError):
    """A numeric evaluation produced a non-finite value."""
