"""Shared exception types."""


class DomainError(ValueError):
    """Invalid input for a mathematically defined operation."""


class VariableMismatch(DomainError):
    """Two expressions do not live over the same variable tuple."""


class NotSubtractionFree(DomainError):
    """An operation required a subtraction-free expression."""


class PoleError(DomainError):
    """Evaluation hit a zero denominator."""


class FormatError(DomainError):
    """A file or text payload does not match the expected schema."""
