"""Exception types shared across the package."""

from __future__ import annotations


class UDWError(Exception):
    """Base class for all package errors."""


class ConfigError(UDWError):
    """Invalid or unparseable run configuration."""


class NonConvergence(UDWError):
    """A quadrature exhausted its budget before reaching tolerance.

    Carries the partial result so callers can inspect how far it got.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class UVDivergent(UDWError):
    """The requested momentum integral diverges at large |k|."""


class OrderingViolated(UDWError):
    """Switching times do not satisfy the ordering the engine assumes."""


class ZeroProbability(UDWError):
    """A projective reduction produced a state of (numerically) zero weight."""


class NotAState(UDWError):
    """Matrix fails the basic density-matrix invariants (trace/Hermiticity)."""


class DomainError(UDWError):
    """Measure evaluated outside its valid input domain."""
