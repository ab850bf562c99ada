"""Exception types shared across the package.

Two failure families are distinguished so callers (and the CLI exit-code
mapping) can tell bad inputs apart from numerical breakdowns:

* ``DomainError`` - the request itself is invalid (out-of-range argument,
  malformed table, query outside a model's tabulated domain).
* ``NumericError`` - the inputs were acceptable but an iterative method
  failed to converge (resonance solver, quadrature, least squares).
"""

from __future__ import annotations


class DomainError(ValueError):
    """Input outside the supported domain of an operation or model."""


class NumericError(RuntimeError):
    """An iterative numerical procedure failed to reach its tolerance."""


class FitError(NumericError):
    """Nonlinear least squares did not converge.

    Carries the last iterate so a caller can inspect how far the
    optimizer got before giving up.
    """

    def __init__(self, message: str, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
