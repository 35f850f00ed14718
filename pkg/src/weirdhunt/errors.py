"""Exception hierarchy shared by all weirdhunt modules."""

from __future__ import annotations


class WeirdHuntError(Exception):
    """Base class for every error raised by this package."""


class ParseError(WeirdHuntError, ValueError):
    """Text could not be read as a decimal or a factorization."""


class FactoringBudgetExceeded(WeirdHuntError):
    """Trial division plus Pollard rho gave up on a cofactor."""


class CapExceeded(WeirdHuntError):
    """A divisor enumeration would produce more elements than allowed."""


class DivisorSpaceTooLarge(CapExceeded):
    """Too many proper divisors for an exact primitivity check."""


class TargetTooLarge(WeirdHuntError):
    """Subset-sum target exceeds the configured cap."""


class WindowTooLarge(WeirdHuntError):
    """Prime window is wider than the configured cap."""


class InvalidInput(WeirdHuntError, ValueError):
    """Arguments violate an operation's preconditions."""


class FingerprintMismatch(WeirdHuntError):
    """A checkpoint was written for a different job."""
