from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbertforge.errors import DimensionPositiveError, ExponentCapError, MalformedInputError, UnitIdealError
from hilbertforge.monomial import (
    MonomialIdeal,
    RingSpec,
    artinian_length,
    divides,
    hilbert_function,
    ideal_arithmetic,
    is_m_primary,
    krull_dim,
    minimalize,
    monomials_of_degree,
    saturate,
)

from conftest import random_ideal

M = MonomialIdeal


def members_up_to(q: MonomialIdeal, top: int) -> set:
    return {u for j in range(top + 1) for u in monomials_of_degree(q.n, j) if q.contains(u)}


def brute_contains(gens, u) -> bool:
    return any(divides(g, u) for g in gens)


# --- documented examples ---------------------------------------------------------

def test_minimalize_drops_multiples():
    assert minimalize([(2, 0), (2, 1)]).gens == ((2, 0),)


@pytest.mark.parametrize("s", [1, 2, 5])
def test_minimalize_keeps_antichain(s):
    assert set(minimalize([(2, 0), (1, s)]).gens) == {(2, 0), (1, s)}


def test_minimalize_empty_is_zero():
    assert minimalize([], n=3).is_zero


def test_minimalize_mixed_lengths_rejected():
    with pytest.raises(MalformedInputError):
        minimalize([(1, 0), (1, 0, 0)])


def test_square_of_maximal_ideal():
    assert set(M.maximal(2).power(2).gens) == {(2, 0), (1, 1), (0, 2)}


def test_sum_with_cube_of_maximal():
    q = M.of(2, [(2, 0), (1, 2)])
    got = ideal_arithmetic(q, M.maximal(2).power(3), "sum")
    assert set(got.gens) == {(2, 0), (1, 2), (0, 3)}
    brute = {u for j in range(7) for u in monomials_of_degree(2, j)
             if brute_contains([(2, 0), (1, 2)], u) or sum(u) >= 3}
    assert members_up_to(got, 6) == brute


def test_product_with_unit_is_identity():
    j = M.of(2, [(2, 0), (0, 3)])
    assert ideal_arithmetic(j, M.unit(2), "product") == j
    assert ideal_arithmetic(j, None, "power", 0).is_unit


def test_mismatched_rings_rejected():
    with pytest.raises(MalformedInputError):
        M.maximal(2) + M.maximal(3)


@pytest.mark.parametrize("s", [1, 2, 3, 7])
def test_saturation_of_embedded_line(s):
    assert saturate(M.of(2, [(2, 0), (1, s)])) == M.of(2, [(1, 0)])


def test_saturation_of_primary_is_unit():
    assert saturate(M.of(2, [(2, 0), (0, 3)])).is_unit


def test_saturated_ideal_is_fixed():
    assert saturate(M.of(2, [(1, 0)])) == M.of(2, [(1, 0)])


def test_saturate_unit_rejected():
    with pytest.raises(UnitIdealError):
        saturate(M.unit(2))


def test_krull_dim_examples():
    assert krull_dim(M.zero(4)) == 4
    assert krull_dim(M.of(2, [(2, 0), (1, 3)])) == 1
    for d in (1, 2, 3):
        n = d + 1
        gens = [(2,) + (0,) * d] + [tuple(1 if i in (0, k) else 0 for i in range(n)) for k in range(1, d)]
        gens.append((1,) + (0,) * (d - 1) + (2,))
        assert krull_dim(M.of(n, gens)) == d
    with pytest.raises(UnitIdealError):
        krull_dim(M.unit(2))


def test_m_primary():
    assert is_m_primary(M.maximal(2))
    assert is_m_primary(M.of(2, [(2, 0), (0, 3)]))
    assert not is_m_primary(M.of(2, [(1, 0)]))


def test_artinian_lengths():
    assert artinian_length(M.maximal(2)) == 1
    assert artinian_length(M.maximal(2).power(2)) == 3
    for s in (1, 2, 4):
        for n in range(0, 7):
            q = M.of(2, [(2, 0), (1, s)]) + M.maximal(2).power(n + 1)
            assert artinian_length(q) == (n + 1) + min(n, s)


def test_artinian_length_rejects_positive_dimension():
    with pytest.raises(DimensionPositiveError):
        artinian_length(M.of(2, [(1, 0)]))


def test_exponent_cap():
    with pytest.raises(ExponentCapError):
        M.of(1, [(2**21,)])


def test_ring_spec_validation():
    with pytest.raises(MalformedInputError):
        RingSpec(0)
    with pytest.raises(MalformedInputError):
        RingSpec(2, 32000)


def test_unit_ideal_representation():
    u = M.of(2, [(0, 0), (1, 1)])
    assert u.is_unit and u.gens == ((0, 0),)


# --- properties -----------------------------------------------------------------

def test_operations_agree_with_membership_oracle():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 3)
        a, b = random_ideal(rng, n, 3, 4), random_ideal(rng, n, 3, 4)
        for j in range(7):
            for u in monomials_of_degree(n, j):
                in_a, in_b = a.contains(u), b.contains(u)
                assert (a + b).contains(u) == (in_a or in_b)
                assert a.intersect(b).contains(u) == (in_a and in_b)
                prod = any(divides(tuple(x + y for x, y in zip(g, h)), u) for g in a.gens for h in b.gens)
                assert (a * b).contains(u) == prod
                assert a.colon(u).contains((0,) * n) == in_a


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=6))
def test_minimalize_is_idempotent_antichain(gens):
    q = minimalize(gens)
    assert minimalize(q.gens) == q
    for g, h in itertools.permutations(q.gens, 2):
        assert not divides(g, h)
    assert members_up_to(q, 6) == {u for j in range(7) for u in monomials_of_degree(3, j) if brute_contains(gens, u)}


def test_saturation_properties():
    rng = random.Random(5)
    for _ in range(80):
        n = rng.randint(1, 3)
        q = random_ideal(rng, n)
        if q.is_unit:
            continue
        sat = saturate(q)
        assert q.issubset(sat)
        if not sat.is_unit:
            assert saturate(sat) == sat
        # equal Hilbert functions in high degree
        assert all(hilbert_function(q, j) == hilbert_function(sat, j) for j in range(30, 33))


def test_permutation_invariance():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.randint(2, 4)
        q = random_ideal(rng, n)
        if q.is_unit:
            continue
        perm = list(range(n))
        rng.shuffle(perm)
        pq = q.permute(perm)
        assert krull_dim(pq) == krull_dim(q)
        assert [hilbert_function(pq, j) for j in range(8)] == [hilbert_function(q, j) for j in range(8)]


def test_artinian_length_is_sum_of_hilbert_function():
    rng = random.Random(9)
    for _ in range(40):
        n = rng.randint(1, 3)
        q = random_ideal(rng, n) + M.maximal(n).power(rng.randint(2, 6))
        assert artinian_length(q) == sum(hilbert_function(q, j) for j in range(40))
