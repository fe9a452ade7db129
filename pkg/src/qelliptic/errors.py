"""Exception types shared across the library."""


class QEllipticError(Exception):
    """Base class for all library-specific errors."""


class DomainError(QEllipticError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateParameters(QEllipticError, ValueError):
    """Parameter values hit a pole or a guarded near-zero denominator."""


class DegenerateSequence(QEllipticError, ValueError):
    """A value sequence violates a pairwise-distinctness guard."""
