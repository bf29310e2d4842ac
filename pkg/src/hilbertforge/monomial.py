"""Monomials and monomial ideals in a polynomial ring K[x_0, ..., x_{n-1}].

A monomial is a tuple of non-negative exponents.  A :class:`MonomialIdeal`
always stores its minimal generating set (a divisibility antichain) in a
canonical order, so two ideals compare equal exactly when they are equal as
ideals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    DimensionPositiveError,
    ExponentCapError,
    MalformedInputError,
    UnitIdealError,
)

Monomial = tuple[int, ...]

EXPONENT_CAP = 2**20


def degree(u: Monomial) -> int:
    return sum(u)


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomials_of_degree(n: int, j: int) -> Iterable[Monomial]:
    """All exponent vectors of length ``n`` and total degree ``j``, in lex order."""
    if n == 0:
        if j == 0:
            yield ()
        return
    if n == 1:
        yield (j,)
        return
    for a in range(j, -1, -1):
        for rest in monomials_of_degree(n - 1, j - a):
            yield (a,) + rest


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """Polynomial ring in ``n`` variables over GF(p) (the field only matters for linear algebra)."""

    n: int
    p: int = 32003

    def __post_init__(self) -> None:
        if self.n < 1:
            raise MalformedInputError(f"variable count must be >= 1, got {self.n}")
        if not _is_prime(self.p):
            raise MalformedInputError(f"characteristic {self.p} is not prime")


def _check(gens: Iterable[Sequence[int]], n: int | None, cap: int) -> tuple[int | None, list[Monomial]]:
    out = []
    for g in gens:
        u = tuple(int(a) for a in g)
        if n is None:
            n = len(u)
        elif len(u) != n:
            raise MalformedInputError(f"monomial {list(u)} has length {len(u)}, expected {n}")
        for a in u:
            if a < 0:
                raise MalformedInputError(f"negative exponent in {list(u)}")
            if a > cap:
                raise ExponentCapError(f"exponent {a} exceeds cap {cap}")
        out.append(u)
    return n, out


def _antichain(gens: Iterable[Monomial]) -> tuple[Monomial, ...]:
    by_degree: dict[int, set[Monomial]] = {}
    for g in gens:
        by_degree.setdefault(sum(g), set()).add(g)
    kept: list[Monomial] = []
    for deg in sorted(by_degree):
        # only strictly lower-degree generators can divide a distinct monomial
        fresh = [u for u in by_degree[deg] if not any(divides(k, u) for k in kept)]
        kept.extend(fresh)
    if any(sum(k) == 0 for k in kept):
        return (kept[0],)
    return tuple(sorted(kept, key=lambda u: (sum(u), tuple(-a for a in u))))


def minimalize(gens: Iterable[Sequence[int]], n: int | None = None, *, cap: int = EXPONENT_CAP) -> "MonomialIdeal":
    """Return the ideal generated by ``gens``, reduced to its minimal generators."""
    n, mons = _check(gens, n, cap)
    if n is None:
        raise MalformedInputError("cannot infer the variable count of an empty generating set")
    return MonomialIdeal(n, _antichain(mons))


@dataclass(frozen=True)
class MonomialIdeal:
    n: int
    gens: tuple[Monomial, ...]

    @classmethod
    def zero(cls, n: int) -> MonomialIdeal:
        return cls(n, ())

    @classmethod
    def unit(cls, n: int) -> MonomialIdeal:
        return cls(n, ((0,) * n,))

    @classmethod
    def maximal(cls, n: int) -> MonomialIdeal:
        return minimalize([tuple(int(i == k) for i in range(n)) for k in range(n)], n)

    @classmethod
    def of(cls, n: int, gens: Iterable[Sequence[int]]) -> MonomialIdeal:
        return minimalize(gens, n)

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return len(self.gens) == 1 and sum(self.gens[0]) == 0

    def contains(self, u: Monomial) -> bool:
        return any(divides(g, u) for g in self.gens)

    def __contains__(self, u: Monomial) -> bool:
        return self.contains(u)

    def issubset(self, other: MonomialIdeal) -> bool:
        self._same_ring(other)
        return all(other.contains(g) for g in self.gens)

    def _same_ring(self, other: MonomialIdeal) -> None:
        if self.n != other.n:
            raise MalformedInputError(f"ideals live in {self.n} and {other.n} variables")

    def __add__(self, other: MonomialIdeal) -> MonomialIdeal:
        self._same_ring(other)
        return MonomialIdeal(self.n, _antichain(self.gens + other.gens))

    def __mul__(self, other: MonomialIdeal) -> MonomialIdeal:
        self._same_ring(other)
        return MonomialIdeal(self.n, _antichain(mul(a, b) for a in self.gens for b in other.gens))

    def power(self, k: int) -> MonomialIdeal:
        if k < 0:
            raise MalformedInputError("ideal power must be non-negative")
        result = MonomialIdeal.unit(self.n)
        for _ in range(k):
            result = result * self
        return result

    def intersect(self, other: MonomialIdeal) -> MonomialIdeal:
        self._same_ring(other)
        return MonomialIdeal(self.n, _antichain(lcm(a, b) for a in self.gens for b in other.gens))

    def colon(self, u: Monomial) -> MonomialIdeal:
        """``self : u`` for a monomial ``u``."""
        return MonomialIdeal(self.n, _antichain(tuple(max(a - b, 0) for a, b in zip(g, u)) for g in self.gens))

    def colon_var_infinity(self, i: int) -> MonomialIdeal:
        """``self : x_i^oo``, obtained by deleting x_i from every generator."""
        return MonomialIdeal(self.n, _antichain(g[:i] + (0,) + g[i + 1:] for g in self.gens))

    def permute(self, perm: Sequence[int]) -> MonomialIdeal:
        """Rename variable ``perm[k]`` to position ``k``."""
        return MonomialIdeal(self.n, _antichain(tuple(g[p] for p in perm) for g in self.gens))

    def to_json(self) -> list[list[int]]:
        return [list(g) for g in self.gens]

    def __str__(self) -> str:
        if self.is_zero:
            return "(0)"
        return "(" + ", ".join(format_monomial(g) for g in self.gens) + ")"


def format_monomial(u: Monomial) -> str:
    names = _var_names(len(u))
    parts = []
    for name, a in zip(names, u):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts) or "1"


def _var_names(n: int) -> list[str]:
    if n <= 4:
        return list("xyzw"[:n])
    return [f"x{i}" for i in range(n)]


def ideal_arithmetic(a: MonomialIdeal, b: MonomialIdeal | None, op: str, k: int = 0) -> MonomialIdeal:
    """Dispatch ``sum``, ``product`` or ``power`` (of ``a`` to the ``k``)."""
    if op == "sum":
        return a + b
    if op == "product":
        return a * b
    if op == "power":
        return a.power(k)
    raise MalformedInputError(f"unknown ideal operation {op!r}")


def _require_proper(q: MonomialIdeal) -> None:
    if q.is_unit:
        raise UnitIdealError(f"{q} is the unit ideal")


def saturate(q: MonomialIdeal) -> MonomialIdeal:
    """``q : m^oo`` as the intersection of ``q : x_i^oo`` over all variables."""
    _require_proper(q)
    result = q.colon_var_infinity(0)
    for i in range(1, q.n):
        result = result.intersect(q.colon_var_infinity(i))
    return result


def krull_dim(q: MonomialIdeal) -> int:
    """Largest set of variables containing the support of no generator."""
    _require_proper(q)
    supports = [frozenset(i for i, a in enumerate(g) if a) for g in q.gens]
    for size in range(q.n, -1, -1):
        for s in itertools.combinations(range(q.n), size):
            free = frozenset(s)
            if not any(sup <= free for sup in supports):
                return size
    return 0  # pragma: no cover - the empty set always qualifies for a proper ideal


def is_m_primary(j: MonomialIdeal) -> bool:
    _require_proper(j)
    return all(
        any(g[i] > 0 and sum(g) == g[i] for g in j.gens)
        for i in range(j.n)
    )


def _drop_last(gens: Iterable[Monomial], e: int) -> tuple[Monomial, ...]:
    return _antichain(g[:-1] for g in gens if g[-1] <= e)


@lru_cache(maxsize=200_000)
def _count_standard(gens: tuple[Monomial, ...], n: int) -> int:
    if any(sum(g) == 0 for g in gens):
        return 0
    if n == 0:
        return 1
    pure = [g[-1] for g in gens if sum(g) == g[-1]]
    if not pure:
        raise DimensionPositiveError("quotient is not Artinian")
    a = min(pure)
    return sum(_count_standard(_drop_last(gens, e), n - 1) for e in range(a))


@lru_cache(maxsize=500_000)
def _count_degree(gens: tuple[Monomial, ...], n: int, j: int) -> int:
    if j < 0 or any(sum(g) == 0 for g in gens):
        return 0
    if n == 0:
        return int(j == 0)
    if n == 1:
        return int(not gens or j < min(g[0] for g in gens))
    return sum(_count_degree(_drop_last(gens, e), n - 1, j - e) for e in range(j + 1))


def artinian_length(q: MonomialIdeal) -> int:
    """Number of standard monomials of an Artinian quotient ``R/q``."""
    return _count_standard(q.gens, q.n)


def hilbert_function(q: MonomialIdeal, j: int) -> int:
    """Number of standard monomials of ``R/q`` in degree ``j``."""
    return _count_degree(q.gens, q.n, j)


def standard_monomials(q: MonomialIdeal, j: int) -> list[Monomial]:
    """Standard monomials of degree ``j`` in lex order."""
    return [u for u in monomials_of_degree(q.n, j) if not q.contains(u)]
