"""Exception hierarchy shared across the package.

Every error class maps to a distinct nonzero CLI exit code (see cli.py).
Messages state the mathematical condition that failed so that a report is
actionable without reading the source.
"""

from __future__ import annotations


class DworkZetaError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InvalidInput(DworkZetaError):
    """Malformed or out-of-contract input (zero coefficient, bad mode, ...)."""

    exit_code = 2


class InvalidFieldSpec(DworkZetaError):
    """The finite-field description is unusable (e.g. reducible polynomial)."""

    exit_code = 3


class NotFullDimensional(DworkZetaError):
    """The Newton polytope does not span the ambient space."""

    exit_code = 4


class UnsupportedCharacteristic(DworkZetaError):
    """p = 2 (or another unsupported characteristic) was requested."""

    exit_code = 5


class NondegeneracyFailure(DworkZetaError):
    """The input polynomial appears to be degenerate.

    Detected in practice when the Jacobian-ring linear algebra cannot proceed
    with unit pivots: for a nondegenerate polynomial (no face restriction
    shares a zero with all its logarithmic derivatives over the torus of the
    algebraic closure) the quotient is a free module with a monomial basis and
    every needed pivot is a unit.
    """

    exit_code = 6


class DecompositionError(DworkZetaError):
    """A cone monomial of high degree admits no valid divisor decomposition."""

    exit_code = 7


class NonTermination(DworkZetaError):
    """The reduction loop failed to make progress (guard against cycling)."""

    exit_code = 8


class InternalPrecisionError(DworkZetaError):
    """A coefficient that must be p-integral came out with a denominator."""

    exit_code = 9


class PrecisionOrLogicError(DworkZetaError):
    """A structural divisibility guaranteed by the theory failed to hold."""

    exit_code = 10


class InsufficientPrecision(DworkZetaError):
    """Lifted coefficients violate the Weil-type bound; raise the precision."""

    exit_code = 11


class ConsistencyFailure(DworkZetaError):
    """The assembled zeta function produced impossible point counts."""

    exit_code = 12


class BudgetExceeded(DworkZetaError):
    """A brute-force enumeration would exceed the configured budget."""

    exit_code = 13


class UnderDetermined(DworkZetaError):
    """Not enough point counts to pin down the rational function."""

    exit_code = 14


class EmptyElement(DworkZetaError):
    """The leading monomial of the zero element was requested."""

    exit_code = 15
