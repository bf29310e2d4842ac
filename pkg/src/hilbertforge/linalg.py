"""Exact linear algebra over GF(p) and truncated graded modules.

A :class:`TruncatedGradedModule` stores, for every degree ``0 <= j <= top``,
the dimension of the degree-``j`` component and, for every variable, the
multiplication map from degree ``j`` to ``j + 1``.  Matrices are dense
``int64`` arrays with entries in ``[0, p)``; with ``p < 2**31`` a product of
two entries never overflows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import MalformedInputError, TruncationError, UnitIdealError
from .monomial import MonomialIdeal, RingSpec, standard_monomials

DEFAULT_PRIME = 32003
CHECK_PRIME = 1000003


def _as_field(a, p: int) -> np.ndarray:
    return np.array(a, dtype=np.int64) % p


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p); returns the nonzero rows and pivot columns."""
    a = _as_field(a, p)
    if a.ndim != 2:
        raise MalformedInputError("rref expects a 2-d array")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank_mod_p(a, p: int) -> int:
    a = _as_field(a, p)
    if a.size == 0:
        return 0
    rows, cols = a.shape
    if rows < cols:
        a = a.T.copy()
        rows, cols = cols, rows
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        below = a[r + 1:, c]
        hit = np.flatnonzero(below)
        if hit.size:
            factors = below[hit] * inv % p
            a[r + 1 + hit] = (a[r + 1 + hit] - np.outer(factors, a[r])) % p
        r += 1
    return r


def rank_small(rows: list[list[int]], p: int) -> int:
    """Rank of a small matrix given as Python lists; avoids numpy overhead."""
    m = [[v % p for v in row] for row in rows if any(v % p for v in row)]
    if not m:
        return 0
    cols = len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        for i in range(r + 1, len(m)):
            if m[i][c]:
                f = m[i][c] * inv % p
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


@dataclass(frozen=True)
class PrimeFieldMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, int, int], ...]
    p: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        seen = set()
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise MalformedInputError(f"entry ({r}, {c}) outside a {self.rows}x{self.cols} matrix")
            if not 1 <= v < self.p:
                raise MalformedInputError(f"entry value {v} not in [1, p-1]")
            if (r, c) in seen:
                raise MalformedInputError(f"duplicate coordinate ({r}, {c})")
            seen.add((r, c))

    @classmethod
    def from_dense(cls, a, p: int = DEFAULT_PRIME) -> PrimeFieldMatrix:
        a = _as_field(a, p)
        if a.ndim != 2:
            raise MalformedInputError("expected a 2-d array")
        rs, cs = np.nonzero(a)
        entries = tuple((int(r), int(c), int(a[r, c])) for r, c in zip(rs, cs))
        return cls(a.shape[0], a.shape[1], entries, p)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        for r, c, v in self.entries:
            out[r, c] = v
        return out


def rank_kernel(m: PrimeFieldMatrix) -> tuple[int, int]:
    rank = rank_mod_p(m.to_dense(), m.p) if m.entries else 0
    return rank, m.cols - rank


@dataclass(frozen=True)
class LinearForm:
    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        if not any(self.coefficients):
            raise MalformedInputError("linear form must be nonzero")

    @classmethod
    def random(cls, n: int, p: int, rng: np.random.Generator) -> LinearForm:
        return cls(tuple(int(c) for c in rng.integers(1, p, size=n)))


@dataclass(frozen=True, eq=False)
class TruncatedGradedModule:
    ring: RingSpec
    top: int
    dims: tuple[int, ...]
    # mult[i][j]: dims[j + 1] x dims[j] matrix of multiplication by x_i
    mult: tuple[tuple[np.ndarray, ...], ...]
    provenance: str = ""
    bases: tuple[tuple, ...] | None = field(default=None, repr=False)

    @property
    def p(self) -> int:
        return self.ring.p

    def total_dim(self) -> int:
        return sum(self.dims)

    def form_map(self, f: LinearForm, j: int) -> np.ndarray:
        """Matrix of multiplication by ``f`` from degree ``j`` to ``j + 1``."""
        acc = np.zeros((self.dims[j + 1], self.dims[j]), dtype=np.int64)
        for c, m in zip(f.coefficients, self.mult):
            if c:
                acc = (acc + c * m[j]) % self.p
        return acc

    def commutes(self) -> bool:
        p = self.p
        n = self.ring.n
        for j in range(self.top - 1):
            for i in range(n):
                for k in range(i + 1, n):
                    a = self.mult[i][j + 1] @ self.mult[k][j] % p
                    b = self.mult[k][j + 1] @ self.mult[i][j] % p
                    if not np.array_equal(a, b):
                        return False
        return True


def cyclic_module(q: MonomialIdeal, top: int, ring: RingSpec) -> TruncatedGradedModule:
    """``R/q`` in degrees ``0..top`` on the basis of standard monomials."""
    if q.is_unit:
        raise UnitIdealError("the unit ideal presents the zero module")
    if q.n != ring.n:
        raise MalformedInputError("ideal and ring disagree on the variable count")
    if top < 0:
        raise MalformedInputError("truncation degree must be >= 0")
    bases = [standard_monomials(q, j) for j in range(top + 1)]
    index = [{u: k for k, u in enumerate(b)} for b in bases]
    mult = []
    for i in range(ring.n):
        per_degree = []
        for j in range(top):
            m = np.zeros((len(bases[j + 1]), len(bases[j])), dtype=np.int64)
            for col, u in enumerate(bases[j]):
                v = u[:i] + (u[i] + 1,) + u[i + 1:]
                row = index[j + 1].get(v)
                if row is not None:
                    m[row, col] = 1
            per_degree.append(m)
        mult.append(tuple(per_degree))
    return TruncatedGradedModule(
        ring=ring,
        top=top,
        dims=tuple(len(b) for b in bases),
        mult=tuple(mult),
        provenance=f"R/{q}",
        bases=tuple(tuple(b) for b in bases),
    )


def _cokernel(image: np.ndarray, dim: int, p: int) -> tuple[np.ndarray, list[int]]:
    """Projection onto ``K^dim / colspan(image)`` and the kept coordinates.

    The quotient basis consists of the standard basis vectors outside the
    pivot positions of the reduced image, i.e. the complement of the
    lexicographically-first spanning set.
    """
    if image.size == 0 or not image.any():
        return np.eye(dim, dtype=np.int64), list(range(dim))
    red, piv = rref(image.T, p)
    keep = [k for k in range(dim) if k not in set(piv)]
    proj = np.zeros((len(keep), dim), dtype=np.int64)
    for row, k in enumerate(keep):
        proj[row, k] = 1
    # v -> v[keep] - red[:, keep]^T v[piv]
    proj[:, piv] = (-red[:, keep].T) % p
    return proj, keep


def quotient_by_linear_form(e: TruncatedGradedModule, f: LinearForm) -> TruncatedGradedModule:
    """``E / fE`` truncated one degree lower than ``E``."""
    if e.top < 1:
        raise TruncationError("need top >= 1 to quotient by a linear form")
    if len(f.coefficients) != e.ring.n:
        raise MalformedInputError("linear form has the wrong number of coefficients")
    p = e.p
    top = e.top - 1
    projs, keeps = [], []
    for j in range(top + 1):
        image = e.form_map(f, j - 1) if j > 0 else np.zeros((e.dims[0], 0), dtype=np.int64)
        proj, keep = _cokernel(image, e.dims[j], p)
        projs.append(proj)
        keeps.append(keep)
    mult = []
    for i in range(e.ring.n):
        mult.append(tuple(
            projs[j + 1] @ e.mult[i][j][:, keeps[j]] % p for j in range(top)
        ))
    return TruncatedGradedModule(
        ring=e.ring,
        top=top,
        dims=tuple(len(k) for k in keeps),
        mult=tuple(mult),
        provenance=f"{e.provenance} / ({_form_str(f)})",
    )


def _form_str(f: LinearForm) -> str:
    return "+".join(f"{c}*x{i}" for i, c in enumerate(f.coefficients) if c)


def h0_constraints(e: TruncatedGradedModule, reg_hint: int) -> list[np.ndarray]:
    """Row-reduced matrices ``C_j`` with ``ker C_j = H^0_m(E)_j`` for ``0 <= j <= reg_hint``.

    ``v`` in degree ``j`` lies in ``H^0`` exactly when every ``x_i v`` lies in
    ``H^0`` one degree up, and ``H^0`` vanishes above ``reg_hint``.
    """
    if reg_hint < 0:
        return []
    if e.top < reg_hint + 1:
        raise TruncationError(f"module truncated at {e.top}, need at least {reg_hint + 1}")
    p = e.p
    upper = np.eye(e.dims[reg_hint + 1], dtype=np.int64)
    out: list[np.ndarray] = [None] * (reg_hint + 1)  # type: ignore[list-item]
    for j in range(reg_hint, -1, -1):
        if e.dims[j] == 0:
            c = np.zeros((0, 0), dtype=np.int64)
        elif upper.shape[0] == 0:
            c = np.zeros((0, e.dims[j]), dtype=np.int64)
        else:
            stacked = np.vstack([upper @ e.mult[i][j] % p for i in range(e.ring.n)])
            c, _ = rref(stacked, p)
        out[j] = c
        upper = c
    return out


def h0_graded(e: TruncatedGradedModule, reg_hint: int) -> list[int]:
    """Dimensions of ``H^0_m(E)_j`` for ``0 <= j <= reg_hint``."""
    cons = h0_constraints(e, reg_hint)
    return [e.dims[j] - cons[j].shape[0] for j in range(reg_hint + 1)]


def random_forms(n: int, p: int, seed: int, count: int) -> list[LinearForm]:
    rng = np.random.default_rng(seed)
    return [LinearForm.random(n, p, rng) for _ in range(count)]


def stack_rank(blocks: Sequence[np.ndarray], p: int) -> int:
    blocks = [b for b in blocks if b.size]
    if not blocks:
        return 0
    return rank_mod_p(np.vstack(blocks), p)
