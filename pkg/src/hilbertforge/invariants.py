"""Homological invariants from Koszul homology.

Two routes compute the Betti table of a cyclic module ``R/q``:

* :func:`monomial_betti` splits the Koszul complex of ``R/q`` by multidegree.
  In multidegree ``alpha`` it has one basis vector ``e_S`` for each set of
  variables ``S`` with ``x^(alpha - S)`` standard, so every homology
  computation is a handful of tiny matrices.
* :func:`koszul_betti` works on any :class:`TruncatedGradedModule` and builds
  the degree-``j`` Koszul matrices from the multiplication tables.

The first is what the pipeline uses; the second cross-checks it.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import CertificationError, MalformedInputError, TruncationError, UnitIdealError
from .linalg import (
    LinearForm,
    TruncatedGradedModule,
    cyclic_module,
    h0_constraints,
    h0_graded,
    quotient_by_linear_form,
    rank_mod_p,
    rank_small,
)
from .monomial import MonomialIdeal, RingSpec, divides, lcm, saturate

MAX_CERTIFICATION_TRIES = 8


@dataclass(frozen=True)
class BettiTable:
    entries: dict[tuple[int, int], int]
    # largest j - i for which the table is known to be complete
    exact_through: int | None = None

    def __post_init__(self) -> None:
        for (i, j), b in self.entries.items():
            if b <= 0:
                raise MalformedInputError(f"Betti number at ({i}, {j}) must be positive, got {b}")

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    @property
    def reg(self) -> int:
        return max(j - i for i, j in self.entries)

    @property
    def pd(self) -> int:
        return max(i for i, _ in self.entries)

    def euler_numerator(self) -> list[int]:
        """Coefficients of sum_{i,j} (-1)^i beta_{i,j} t^j, lowest degree first."""
        top = max(j for _, j in self.entries)
        out = [0] * (top + 1)
        for (i, j), b in self.entries.items():
            out[j] += (-1) ** i * b
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def to_json(self) -> list[list[int]]:
        return [[i, j, b] for (i, j), b in sorted(self.entries.items())]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.entries.items())))


def _koszul_cells(q: MonomialIdeal, alpha: tuple[int, ...], support: list[int]) -> list[list[tuple[int, ...]]]:
    cells = []
    for i in range(len(support) + 1):
        level = []
        for s in itertools.combinations(support, i):
            u = list(alpha)
            for k in s:
                u[k] -= 1
            if not q.contains(tuple(u)):
                level.append(s)
        cells.append(level)
    return cells


def _differential_rank(src: list[tuple[int, ...]], dst: list[tuple[int, ...]], p: int) -> int:
    if not src or not dst:
        return 0
    index = {s: r for r, s in enumerate(dst)}
    rows = [[0] * len(src) for _ in dst]
    for c, s in enumerate(src):
        for pos, k in enumerate(s):
            face = s[:pos] + s[pos + 1:]
            r = index.get(face)
            if r is not None:
                rows[r][c] = -1 if pos % 2 else 1
    return rank_small(rows, p)


def monomial_betti(q: MonomialIdeal, p: int) -> BettiTable:
    """Graded Betti numbers of ``R/q`` over GF(p) via the multigraded Koszul complex.

    Only multidegrees ``alpha`` equal to the lcm of the generators dividing
    ``x^alpha`` can carry homology in positive homological degree, so the
    remaining ones are skipped.
    """
    if q.is_unit:
        raise UnitIdealError("the unit ideal presents the zero module")
    entries: Counter[tuple[int, int]] = Counter({(0, 0): 1})
    if q.is_zero:
        return BettiTable(dict(entries))
    top = reduce(lcm, q.gens)
    for alpha in itertools.product(*(range(a + 1) for a in top)):
        below = [g for g in q.gens if divides(g, alpha)]
        if not below or reduce(lcm, below) != alpha:
            continue
        support = [k for k, a in enumerate(alpha) if a]
        cells = _koszul_cells(q, alpha, support)
        ranks = [0] * (len(cells) + 1)
        for i in range(1, len(cells)):
            ranks[i] = _differential_rank(cells[i], cells[i - 1], p)
        deg = sum(alpha)
        for i, level in enumerate(cells):
            b = len(level) - ranks[i] - ranks[i + 1]
            if b:
                entries[(i, deg)] += b
    return BettiTable(dict(entries))


def _koszul_matrix(e: TruncatedGradedModule, i: int, j: int, subsets: list[list[tuple[int, ...]]]) -> np.ndarray:
    """Koszul differential K_i -> K_{i-1} in internal degree ``j``."""
    src_deg, dst_deg = j - i, j - i + 1
    ds, dt = e.dims[src_deg], e.dims[dst_deg]
    src, dst = subsets[i], subsets[i - 1]
    index = {s: r for r, s in enumerate(dst)}
    out = np.zeros((len(dst) * dt, len(src) * ds), dtype=np.int64)
    for c, s in enumerate(src):
        for pos, k in enumerate(s):
            r = index[s[:pos] + s[pos + 1:]]
            block = e.mult[k][src_deg]
            out[r * dt:(r + 1) * dt, c * ds:(c + 1) * ds] = block if pos % 2 == 0 else (-block) % e.p
    return out


def koszul_betti(e: TruncatedGradedModule) -> BettiTable:
    """Betti numbers of a truncated module, exact for ``j - i <= e.top - 1``.

    Degrees above the truncation are not visible, so entries with
    ``j - i >= e.top`` are never reported; ``exact_through`` records the limit.
    """
    if e.top < 1:
        raise TruncationError("koszul_betti needs top >= 1")
    n = e.ring.n
    p = e.p
    subsets = [list(itertools.combinations(range(n), i)) for i in range(n + 1)]

    def rank(i: int, j: int) -> int:
        if i < 1 or i > n:
            return 0
        if j - i < 0 or j - i + 1 > e.top:
            return 0
        if e.dims[j - i] == 0 or e.dims[j - i + 1] == 0:
            return 0
        return rank_mod_p(_koszul_matrix(e, i, j, subsets), p)

    entries = {}
    for i in range(n + 1):
        for shift in range(e.top):
            j = i + shift
            size = len(subsets[i]) * e.dims[shift]
            b = size - rank(i, j) - rank(i + 1, j)
            if b:
                entries[(i, j)] = b
    return BettiTable(entries, exact_through=e.top - 1)


@dataclass(frozen=True)
class HomologicalProfile:
    reg: int
    reg1: int | None
    pd: int
    depth: int


def homological_profile(b: BettiTable, n: int, saturated: BettiTable | None = None) -> HomologicalProfile:
    """reg, reg^1, projective dimension and depth (Auslander-Buchsbaum) from Betti tables.

    ``saturated`` is the table of the module modulo its zeroth local
    cohomology; ``reg1`` is its regularity.  ``None`` there means that
    quotient is zero, and then reg^1 is undefined (-infinity).
    """
    if not b.entries:
        raise MalformedInputError("empty Betti table")
    pd = b.pd
    return HomologicalProfile(
        reg=b.reg,
        reg1=saturated.reg if saturated is not None and saturated.entries else None,
        pd=pd,
        depth=n - pd,
    )


def filter_regular_check(e: TruncatedGradedModule, f: LinearForm, reg_e: int) -> bool:
    """Whether ``0 :_E f`` is contained in ``H^0_m(E)`` in every visible degree.

    Degrees up to ``reg_e + 1`` compare the kernel of ``f`` with ``H^0``;
    above ``reg_e`` the zeroth local cohomology vanishes, so ``f`` must be
    injective there.  Every degree below the truncation is checked.
    """
    if e.top < reg_e + 2:
        raise TruncationError(f"module truncated at {e.top}, need at least {reg_e + 2}")
    p = e.p
    cons = h0_constraints(e, reg_e)
    for j in range(e.top):
        if e.dims[j] == 0:
            continue
        fm = e.form_map(f, j)
        r = rank_mod_p(fm, p) if fm.size else 0
        if j > reg_e or cons[j].shape[0] == e.dims[j]:
            if r != e.dims[j]:
                return False
            continue
        blocks = [b for b in (fm, cons[j]) if b.size]
        if rank_mod_p(np.vstack(blocks), p) != r:
            return False
    return True


def is_nonzerodivisor(e: TruncatedGradedModule, f: LinearForm) -> bool:
    """Injectivity of ``f`` on every degree below the truncation."""
    for j in range(e.top):
        if e.dims[j] and rank_mod_p(e.form_map(f, j), e.p) != e.dims[j]:
            return False
    return True


@dataclass
class SectionChainReport:
    B: int
    h0_chain: list[int]
    seeds: list[list[int]]
    p: int
    truncation: int
    certified: bool = True
    flags: list[str] = field(default_factory=list)

    @property
    def depth(self) -> int:
        """First index whose quotient has nonzero H^0 (the Artinian end counts)."""
        for i, h in enumerate(self.h0_chain):
            if h > 0:
                return i
        return len(self.h0_chain)


def section_chain(
    q: MonomialIdeal,
    d: int,
    seed: int,
    ring: RingSpec,
    reg: int,
    top: int | None = None,
) -> SectionChainReport:
    """Cut ``R/q`` by ``d`` certified filter-regular generic linear forms.

    Records ``h^0`` of every intermediate quotient ``M_0, ..., M_{d-1}`` and
    the length ``B`` of the final Artinian one.  ``reg`` is the regularity of
    ``R/q``; it bounds the regularity of every quotient in the chain.
    """
    if top is None:
        top = reg + d + 2
    if top < reg + d + 1:
        raise TruncationError(f"truncation {top} too low for reg {reg} and {d} sections")
    m = cyclic_module(q, top, ring)
    h0s: list[int] = []
    seeds: list[list[int]] = []
    for i in range(d):
        h0s.append(sum(h0_graded(m, reg)))
        tried = []
        for attempt in range(MAX_CERTIFICATION_TRIES):
            tried.append([seed, i, attempt])
            rng = np.random.default_rng([seed, i, attempt])
            f = LinearForm.random(ring.n, ring.p, rng)
            if filter_regular_check(m, f, reg):
                seeds.append([seed, i, attempt])
                m = quotient_by_linear_form(m, f)
                break
        else:
            raise CertificationError(
                f"no filter-regular form certified for section {i} of R/{q} at p={ring.p}",
                seeds=[s[2] for s in tried],
            )
    flags = []
    if any(m.dims[j] for j in range(reg + 1, m.top + 1)):
        flags.append("final quotient nonzero above reg")
    return SectionChainReport(
        B=m.total_dim(),
        h0_chain=h0s,
        seeds=seeds,
        p=ring.p,
        truncation=top,
        certified=not flags,
        flags=flags,
    )


def saturated_betti(q: MonomialIdeal, p: int) -> BettiTable | None:
    sat = saturate(q)
    if sat.is_unit:
        return None
    return monomial_betti(sat, p)
