"""Hilbert functions, Hilbert-Samuel functions of good filtrations, and coefficient fitting."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Sequence

from .errors import (
    FiltrationError,
    MalformedInputError,
    ResourceCeilingError,
    StabilizationError,
    UnitIdealError,
)
from .monomial import (
    MonomialIdeal,
    RingSpec,
    artinian_length,
    format_monomial,
    hilbert_function,
    is_m_primary,
)

__all__ = [
    "FiltrationSpec",
    "HilbertCoefficients",
    "binom_poly",
    "expand_series",
    "fit_coefficients",
    "fit_filtration",
    "hilbert_function",
    "hilbert_samuel",
    "hilbert_samuel_values",
    "series_numerator",
    "validate_filtration",
]

RECURSION_CEILING = 5000


# --- pivot recursion -------------------------------------------------------

def _poly_add(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _numerator(gens: tuple[tuple[int, ...], ...], n: int, budget: list[int]) -> list[int]:
    budget[0] -= 1
    if budget[0] < 0:
        raise ResourceCeilingError("pivot recursion exceeded its call ceiling")
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    counts = [sum(1 for g in gens if g[k]) for k in range(n)]
    k = max(range(n), key=lambda v: counts[v])
    if counts[k] <= 1:
        # pairwise coprime generators form a regular sequence
        out = [1]
        for g in gens:
            out = _poly_mul(out, [1] + [0] * (sum(g) - 1) + [-1])
        return out
    mixed = sorted(g[k] for g in gens if g[k] and sum(g) != g[k])
    e = mixed[(len(mixed) - 1) // 2]
    pivot = tuple(e if v == k else 0 for v in range(n))
    ideal = MonomialIdeal(n, gens)
    plus = ideal + MonomialIdeal(n, (pivot,))
    colon = ideal.colon(pivot)
    shifted = [0] * e + _numerator(colon.gens, n, budget)
    return _poly_add(_numerator(plus.gens, n, budget), shifted)


def series_numerator(q: MonomialIdeal, ceiling: int = RECURSION_CEILING) -> list[int]:
    """Numerator ``h(t)`` of the Hilbert series ``h(t) / (1 - t)^n`` of ``R/q``.

    Pivot recursion: for a variable shared by two generators and a pivot
    ``p = x_k^e`` outside ``q``, ``h(q) = h(q + (p)) + t^e h(q : p)``.  The
    recursion bottoms out at ideals whose generators are pairwise coprime.
    Coefficients are returned lowest degree first.
    """
    if q.is_unit:
        raise UnitIdealError("the unit ideal presents the zero module")
    return _trim(_numerator(q.gens, q.n, [ceiling]))


def expand_series(numerator: Sequence[int], n: int, upto: int) -> list[int]:
    """Coefficients of ``numerator / (1 - t)^n`` in degrees ``0..upto``."""
    coeffs = list(numerator[: upto + 1]) + [0] * max(0, upto + 1 - len(numerator))
    for _ in range(n):
        run = 0
        for j in range(upto + 1):
            run += coeffs[j]
            coeffs[j] = run
    return coeffs


# --- filtrations -------------------------------------------------------------

@dataclass(frozen=True)
class FiltrationSpec:
    """A good J-filtration of ``M = R/Q``.

    ``initial`` lists ``N_0, ..., N_r`` (``N_0`` is the unit ideal); beyond
    ``r`` the filtration follows ``N_{k+1} = J N_k + Q``.  An empty
    ``initial`` means the J-adic filtration.
    """

    ring: RingSpec
    Q: MonomialIdeal
    J: MonomialIdeal
    initial: tuple[MonomialIdeal, ...] = ()

    def __post_init__(self) -> None:
        validate_filtration(self)

    @classmethod
    def adic(cls, ring: RingSpec, Q: MonomialIdeal, J: MonomialIdeal | None = None) -> FiltrationSpec:
        return cls(ring, Q, J if J is not None else MonomialIdeal.maximal(ring.n))

    @property
    def r(self) -> int:
        return max(len(self.initial) - 1, 0)

    @property
    def is_maximal_adic(self) -> bool:
        return self.r == 0 and self.J == MonomialIdeal.maximal(self.ring.n)

    def ideal(self, k: int) -> MonomialIdeal:
        """``N_k``, the ideal with ``M_k = N_k / Q``."""
        return _filtration_ideal(self, k)

    def saturated(self) -> FiltrationSpec:
        """The induced filtration on ``M / H^0_m(M)``."""
        from .monomial import saturate

        qbar = saturate(self.Q)
        if qbar.is_unit:
            raise UnitIdealError("M / H^0(M) is zero")
        init = tuple(self.initial[0:1]) + tuple(nk + qbar for nk in self.initial[1:])
        # collapse a chain that became J-adic earlier than r
        while len(init) >= 2 and init[-1] == self.J * init[-2] + qbar:
            init = init[:-1]
        if len(init) == 1:
            init = ()
        return FiltrationSpec(self.ring, qbar, self.J, init)


@lru_cache(maxsize=4096)
def _filtration_ideal(f: FiltrationSpec, k: int) -> MonomialIdeal:
    if k < 0:
        raise MalformedInputError("filtration index must be >= 0")
    if k == 0:
        return MonomialIdeal.unit(f.ring.n)
    if f.initial and k < len(f.initial):
        return f.initial[k]
    return f.J * _filtration_ideal(f, k - 1) + f.Q


def _first_missing(small: MonomialIdeal, big: MonomialIdeal) -> str | None:
    for g in small.gens:
        if not big.contains(g):
            return format_monomial(g)
    return None


def validate_filtration(f: FiltrationSpec) -> None:
    n = f.ring.n
    for name, ideal in (("Q", f.Q), ("J", f.J)):
        if ideal.n != n:
            raise FiltrationError(f"{name} lives in {ideal.n} variables, ring has {n}")
    if f.Q.is_unit:
        raise FiltrationError("Q is the unit ideal; M = R/Q is zero")
    if f.J.is_unit or f.J.is_zero or not is_m_primary(f.J):
        raise FiltrationError(f"J = {f.J} is not m-primary")
    if not f.initial:
        return
    if not f.initial[0].is_unit:
        raise FiltrationError("N_0 must be the unit ideal (M_0 = M)", index=0)
    for k, nk in enumerate(f.initial):
        if nk.n != n:
            raise FiltrationError(f"N_{k} lives in {nk.n} variables", index=k)
        miss = _first_missing(f.Q, nk)
        if miss is not None:
            raise FiltrationError(f"N_{k} does not contain Q (missing {miss})", index=k)
        if k == 0:
            continue
        prev = f.initial[k - 1]
        need = f.J * prev + f.Q
        miss = _first_missing(need, nk)
        if miss is not None:
            raise FiltrationError(
                f"filtration condition J*M_{k - 1} in M_{k} violated: {miss} not in N_{k}", index=k
            )
        miss = _first_missing(nk, prev)
        if miss is not None:
            raise FiltrationError(f"N_{k} is not contained in N_{k - 1} ({miss})", index=k)
    r = len(f.initial) - 1
    if r >= 1 and f.initial[r] == f.J * f.initial[r - 1] + f.Q:
        raise FiltrationError(
            f"N_{r} = J*N_{r - 1} + Q, so the reduction number is smaller than {r}", index=r
        )


def hilbert_samuel(f: FiltrationSpec, n: int) -> int:
    """``H(n) = length(M / M_{n+1}) = length(R / N_{n+1})``."""
    if n < -1:
        raise MalformedInputError("Hilbert-Samuel function is defined for n >= -1")
    if n == -1:
        return 0
    return artinian_length(f.ideal(n + 1))


def hilbert_samuel_values(f: FiltrationSpec, n_max: int) -> list[int]:
    """``H(0), ..., H(n_max)``; the maximal-ideal-adic case sums the Hilbert function."""
    if f.is_maximal_adic:
        out, run = [], 0
        for j in range(n_max + 1):
            run += hilbert_function(f.Q, j)
            out.append(run)
        return out
    return [hilbert_samuel(f, k) for k in range(n_max + 1)]


# --- coefficient fitting -----------------------------------------------------

def binom_poly(t: int, m: int) -> int:
    """``C(t + m, m)`` as a polynomial in ``t`` (valid for negative ``t`` too)."""
    if m < 0:
        return 0
    num = 1
    for l in range(1, m + 1):
        num *= t + l
    return num // factorial(m)


@dataclass(frozen=True)
class HilbertCoefficients:
    d: int
    e: tuple[int, ...]
    postulation: int
    mode: str
    certificate: str  # "proved" or "guard-certified"
    window: tuple[int, int]

    def __post_init__(self) -> None:
        if self.mode not in ("local", "graded"):
            raise MalformedInputError(f"unknown mode {self.mode!r}")
        expected = self.d + 1 if self.mode == "local" else self.d
        if len(self.e) != expected:
            raise MalformedInputError(f"{self.mode} mode needs {expected} coefficients, got {len(self.e)}")

    @property
    def degree(self) -> int:
        return len(self.e) - 1

    def __call__(self, t: int) -> int:
        k = self.degree
        return sum((-1) ** i * c * binom_poly(t, k - i) for i, c in enumerate(self.e))

    def xi(self, s: int) -> int:
        return max([self.e[0]] + [abs(c) for c in self.e[1:s + 1]])


def _interpolate(values: Sequence[int], start: int, k: int) -> list[int]:
    """Signed binomial-basis coefficients ``c_i`` (``P = sum c_i C(t+k-i, k-i)``) through ``k+1`` points."""
    pts = list(range(start, start + k + 1))
    resid = [values[t] for t in pts]
    coeffs = []
    for i in range(k + 1):
        deg = k - i
        diff = resid[: deg + 1]
        for _ in range(deg):
            diff = [b - a for a, b in zip(diff, diff[1:])]
        c = diff[0]
        coeffs.append(c)
        resid = [v - c * binom_poly(t, deg) for v, t in zip(resid, pts)]
    if any(resid):
        raise StabilizationError("interpolation residual is nonzero")  # pragma: no cover
    return coeffs


def fit_coefficients(
    values: Sequence[int],
    d: int,
    mode: str = "local",
    n0: int | None = None,
    guard: int | None = None,
) -> HilbertCoefficients:
    """Hilbert coefficients from ``values[n] = H(n)`` (local) or ``h(n)`` (graded).

    With ``n0`` given (a proven stabilization index) the interpolant on
    ``[n0, n0 + deg]`` is checked against the guard window and the result is
    ``proved``.  Without it the least ``n0`` whose interpolant matches every
    later value is detected, and the result is only ``guard-certified``.
    """
    if d < 0:
        raise MalformedInputError("dimension must be >= 0")
    if mode not in ("local", "graded"):
        raise MalformedInputError(f"unknown mode {mode!r}")
    k = d if mode == "local" else d - 1
    if k < 0:
        raise MalformedInputError("graded fit of a zero-dimensional module has no coefficients")
    guard = d + 5 if guard is None else guard
    n_max = len(values) - 1
    candidates = [n0] if n0 is not None else range(0, n_max + 1)
    for start in candidates:
        if start < 0:
            raise MalformedInputError("stabilization index must be >= 0")
        if start + k + guard > n_max:
            break
        coeffs = _interpolate(values, start, k)
        poly = HilbertCoefficients(
            d=d,
            e=tuple((-1) ** i * c for i, c in enumerate(coeffs)),
            postulation=0,
            mode=mode,
            certificate="proved" if n0 is not None else "guard-certified",
            window=(start, n_max),
        )
        if all(values[t] == poly(t) for t in range(start, n_max + 1)):
            post = start
            while post > 0 and values[post - 1] == poly(post - 1):
                post -= 1
            return HilbertCoefficients(poly.d, poly.e, post, poly.mode, poly.certificate, poly.window)
        if n0 is not None:
            raise StabilizationError(f"values disagree with the interpolant on [{n0}, {n_max}]")
    raise StabilizationError(f"no stabilization detected within n <= {n_max}; raise n_max")


def fit_filtration(f: FiltrationSpec, d: int, n0: int | None = None, guard: int | None = None,
                   n_max_ceiling: int = 80) -> tuple[HilbertCoefficients, list[int]]:
    """Fit the Hilbert-Samuel polynomial, growing the computed window when needed."""
    guard = d + 5 if guard is None else guard
    if n0 is not None:
        values = hilbert_samuel_values(f, n0 + d + guard)
        return fit_coefficients(values, d, "local", n0=n0, guard=guard), values
    n_max = 2 * d + guard + 4
    while True:
        values = hilbert_samuel_values(f, n_max)
        try:
            return fit_coefficients(values, d, "local", guard=guard), values
        except StabilizationError:
            if n_max >= n_max_ceiling:
                raise
            n_max = min(2 * n_max, n_max_ceiling)
