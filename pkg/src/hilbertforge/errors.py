"""Exception hierarchy shared by every hilbertforge module."""

from __future__ import annotations


class HilbertForgeError(Exception):
    """Base class for all library errors."""


class MalformedInputError(HilbertForgeError, ValueError):
    pass


class UnitIdealError(HilbertForgeError, ValueError):
    """An invariant was requested for the unit ideal (zero module)."""


class DimensionPositiveError(HilbertForgeError, ValueError):
    """A length was requested for a quotient that is not Artinian."""


class ExponentCapError(HilbertForgeError, OverflowError):
    pass


class TruncationError(HilbertForgeError):
    """A truncated graded module does not reach the degree an operation needs."""


class CertificationError(HilbertForgeError):
    """No filter-regular linear form could be certified within the retry budget."""

    def __init__(self, message: str, seeds: list[int] | None = None):
        super().__init__(message)
        self.seeds = list(seeds or [])


class StabilizationError(HilbertForgeError):
    """The Hilbert-Samuel function did not agree with a polynomial on the guard window."""


class FiltrationError(HilbertForgeError, ValueError):
    """A filtration presentation violates one of its structural conditions."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class UnsupportedCaseError(HilbertForgeError):
    pass


class ResourceCeilingError(HilbertForgeError):
    pass
