"""Exception types shared across the package."""

from __future__ import annotations


class SchreierError(Exception):
    """Base class for all errors raised by schreierlab."""


class ValidationError(SchreierError, ValueError):
    """A graph, coloring or document breaks a structural invariant."""

    def __init__(self, message, violations=()):
        self.violations = list(violations)
        if self.violations:
            message = f"{message}: " + "; ".join(self.violations)
        super().__init__(message)


class IncomparableError(SchreierError, ValueError):
    """Two rooted graphs live in different spaces (generator sets or alphabets differ)."""


class BudgetExceeded(SchreierError):
    """A path census ran out of node expansions.

    ``half_length`` is the half-length being searched when the cap was hit;
    every shorter half-length was fully cleared.
    """

    def __init__(self, expansions, half_length, unresolved=()):
        self.expansions = expansions
        self.half_length = half_length
        self.unresolved = list(unresolved)
        msg = f"node-expansion budget exhausted after {expansions} expansions at half-length {half_length}"
        if self.unresolved:
            msg += f" (unresolved roots: {self.unresolved})"
        super().__init__(msg)


class ResampleCapExceeded(SchreierError):
    """The resampling engine hit its resample cap before reaching a nonrepetitive coloring."""

    def __init__(self, resamples, alphabet_size, last_witness):
        self.resamples = resamples
        self.alphabet_size = alphabet_size
        self.last_witness = last_witness
        super().__init__(
            f"no {alphabet_size}-coloring found within {resamples} resamples; "
            f"last repetitive path {last_witness}"
        )


class BoundaryError(SchreierError):
    """A word walked off a truncated graph."""


class UnsupportedFamily(SchreierError, ValueError):
    """The requested group family cannot be built by this operation."""
