"""Invariants of monomial quotients and exact checks of regularity and Hilbert-coefficient bounds."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import HilbertForgeError  # noqa: E402
from .hilbert import FiltrationSpec  # noqa: E402
from .monomial import MonomialIdeal, RingSpec  # noqa: E402
from .verifier import analyze_case, verify_case  # noqa: E402

__all__ = [
    "FiltrationSpec",
    "HilbertForgeError",
    "MonomialIdeal",
    "RingSpec",
    "__version__",
    "analyze_case",
    "verify_case",
]
