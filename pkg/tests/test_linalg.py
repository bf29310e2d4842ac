from __future__ import annotations

import random

import numpy as np
import pytest

from hilbertforge.errors import MalformedInputError, UnitIdealError
from hilbertforge.linalg import (
    DEFAULT_PRIME,
    LinearForm,
    PrimeFieldMatrix,
    cyclic_module,
    h0_graded,
    quotient_by_linear_form,
    random_forms,
    rank_kernel,
    rank_mod_p,
    rank_small,
)
from hilbertforge.monomial import MonomialIdeal, RingSpec, hilbert_function, saturate

from conftest import random_ideal

M = MonomialIdeal


def test_rank_kernel_examples():
    assert rank_kernel(PrimeFieldMatrix.from_dense(np.eye(3, dtype=np.int64))) == (3, 0)
    assert rank_kernel(PrimeFieldMatrix(2, 5, ())) == (0, 5)
    assert rank_kernel(PrimeFieldMatrix.from_dense([[1, 2], [2, 4]], 32003)) == (1, 1)


def test_matrix_validation():
    with pytest.raises(MalformedInputError):
        PrimeFieldMatrix(2, 2, ((0, 0, 1), (0, 0, 2)))
    with pytest.raises(MalformedInputError):
        PrimeFieldMatrix(2, 2, ((0, 0, 0),))
    with pytest.raises(MalformedInputError):
        PrimeFieldMatrix(2, 2, ((2, 0, 1),))


def test_rank_against_sympy_oracle():
    # sympy's DomainMatrix over GF(p) is an independent elimination
    from sympy import GF
    from sympy.polys.matrices import DomainMatrix

    rng = np.random.default_rng(0)
    for k in range(500):
        r, c = (int(x) for x in rng.integers(1, 21, size=2))
        p = 7 if k % 3 == 0 else DEFAULT_PRIME
        a = rng.integers(0, p, size=(r, c))
        a[rng.random(size=(r, c)) < 0.5] = 0
        if k % 5 == 0 and r > 1:
            a[-1] = (a[0] * 3 + a[1]) % p
        field = GF(p)
        want = DomainMatrix([[field(int(x)) for x in row] for row in a.tolist()], (r, c), field).rank()
        assert rank_mod_p(a, p) == want
        assert rank_small(a.tolist(), p) == want


def test_cyclic_module_examples():
    ring = RingSpec(2)
    assert cyclic_module(M.zero(2), 2, ring).dims == (1, 2, 3)
    assert cyclic_module(M.of(2, [(2, 0), (1, 2)]), 4, ring).dims == (1, 2, 2, 1, 1)
    assert cyclic_module(M.maximal(2), 3, ring).dims == (1, 0, 0, 0)
    with pytest.raises(UnitIdealError):
        cyclic_module(M.unit(2), 3, ring)


def test_cyclic_module_commutes_and_matches_hilbert_function():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(1, 3)
        q = random_ideal(rng, n, 3, 4)
        if q.is_unit:
            continue
        e = cyclic_module(q, 6, RingSpec(n))
        assert e.commutes()
        assert list(e.dims) == [hilbert_function(q, j) for j in range(7)]


def test_quotient_examples():
    e = cyclic_module(M.zero(1), 4, RingSpec(1))
    assert quotient_by_linear_form(e, LinearForm((5,))).dims == (1, 0, 0, 0)
    e = cyclic_module(M.of(2, [(2, 0), (1, 2)]), 4, RingSpec(2))
    f = random_forms(2, DEFAULT_PRIME, 1, 1)[0]
    assert quotient_by_linear_form(e, f).total_dim() == 2
    for n in (2, 3):
        m = cyclic_module(M.zero(n), n + 2, RingSpec(n))
        for f in random_forms(n, DEFAULT_PRIME, 4, n):
            m = quotient_by_linear_form(m, f)
        assert m.total_dim() == 1


def test_quotient_of_cm_module_matches_series_oracle():
    # for a regular linear form dims drop to the first differences of the Hilbert function
    for gens, n in (([(1, 1)], 2), ([(2, 0, 0), (0, 3, 0)], 3), ([(1, 1, 0, 0), (0, 0, 1, 1)], 4)):
        q = M.of(n, gens)
        e = cyclic_module(q, 7, RingSpec(n))
        f = random_forms(n, DEFAULT_PRIME, 2, 1)[0]
        h = [hilbert_function(q, j) for j in range(7)]
        diffs = [h[0]] + [max(b - a, 0) for a, b in zip(h, h[1:])]
        assert list(quotient_by_linear_form(e, f).dims) == diffs[:7]


def test_quotient_is_deterministic():
    e = cyclic_module(M.of(3, [(1, 1, 0), (0, 2, 1)]), 5, RingSpec(3))
    f = LinearForm((3, 7, 11))
    a, b = quotient_by_linear_form(e, f), quotient_by_linear_form(e, f)
    assert a.dims == b.dims
    assert all(np.array_equal(x, y) for xs, ys in zip(a.mult, b.mult) for x, y in zip(xs, ys))


@pytest.mark.parametrize("s", [1, 2, 3, 5])
def test_h0_of_embedded_line(s):
    e = cyclic_module(M.of(2, [(2, 0), (1, s)]), s + 3, RingSpec(2))
    got = h0_graded(e, s)
    assert got == [0] + [1] * s


def test_h0_of_saturated_is_zero():
    q = M.of(3, [(1, 1, 0), (1, 0, 1)])
    assert sum(h0_graded(cyclic_module(q, 4, RingSpec(3)), 1)) == 0


def test_h0_of_artinian_is_everything():
    q = M.of(2, [(2, 0), (0, 2)])
    assert sum(h0_graded(cyclic_module(q, 4, RingSpec(2)), 2)) == 4


def test_h0_matches_standard_monomials_of_saturation():
    from hilbertforge.invariants import monomial_betti
    from hilbertforge.monomial import monomials_of_degree

    rng = random.Random(17)
    for _ in range(40):
        n = rng.randint(1, 3)
        q = random_ideal(rng, n, 3, 4)
        if q.is_unit:
            continue
        reg = monomial_betti(q, DEFAULT_PRIME).reg
        sat = saturate(q)
        # monomials of sat(q) outside q; none exist above reg
        want = sum(1 for j in range(reg + 6) for u in monomials_of_degree(n, j)
                   if sat.contains(u) and not q.contains(u))
        assert sum(h0_graded(cyclic_module(q, reg + 2, RingSpec(n)), reg)) == want
