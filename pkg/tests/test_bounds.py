from __future__ import annotations

import math
import random
import time

import pytest

from hilbertforge import bounds as bd
from hilbertforge.errors import MalformedInputError, ResourceCeilingError


def test_reg1_recurrence_examples():
    assert bd.reg1_recurrence((1,), 0, 1) == ([1], 0)
    assert bd.reg1_recurrence((1, 0), 0, 2) == ([1, 2], 1)
    m, bound = bd.reg1_recurrence((2, 1), 0, 2)
    assert m == [2, 2 + 2 * math.comb(2, 1) - 1 * math.comb(1, 0)] and bound == 4


def test_reg1_bound_examples():
    assert bd.reg1_bound_explicit(1, 0, 1) == 0
    assert bd.reg1_bound_explicit(1, 0, 2) == 2
    assert bd.reg1_bound_explicit(2, 1, 3) == 4094


def test_reg_bound_coefficients_examples():
    assert bd.reg_bound_from_coefficients(2, 0, 1) == 7
    assert bd.reg_bound_from_coefficients(1, 0, 2) == 30
    assert bd.reg_bound_from_coefficients(1, 0, 1) == 2


def test_reg_bound_depth_examples():
    assert bd.reg_bound_from_depth(1, 0, 1, 1) == 2
    assert bd.reg_bound_from_depth(1, 0, 2, 1) == 254
    big = bd.reg_bound_from_depth(3, 0, 5, 1)
    assert big == 4**1200 - 2 and len(str(big)) == 723


def test_lower_coefficient_bound_examples():
    assert bd.coeff_bound_from_xi(6, 0, 1) == 15
    assert bd.coeff_bound_from_xi(1, 0, 2) == (15, 32)
    assert bd.coeff_bound_from_xi(1, 0, 1) == 0


def test_top_coeff_bound_depth_examples():
    v = bd.top_coeff_bounds(1, 0, 1, 1, 1, e0=1)
    assert (v.general, v.cm) == (8, 8)
    assert bd.top_coeff_bounds(1, 0, 2, 1, 2).general == 2**24
    # exponent 3 j (d - t + 1) j! with d = t = 2, j = 1 is 3
    assert bd.top_coeff_bounds(6, 0, 2, 2, 1).adic == 7**3
    assert bd.top_coeff_bounds(1, 0, 2, 0, 1).general is None


def test_top_coeff_bound_depth_range_checked():
    with pytest.raises(MalformedInputError):
        bd.top_coeff_bounds(1, 0, 3, 1, 2)


def test_section_and_graded_coefficient_examples():
    assert bd.coeff_bound_section_length_values(2, 2, 1) == (12, None)
    assert bd.coeff_bound_section_length_values(1, 0, 3)[0] == 8
    for s in range(1, 8):
        assert bd.coeff_bound_section_length_values(2, s, 1)[0] == 2 * (2 * s + 2) > s


def test_aux_bounds_embedded_line():
    for s in (1, 2, 5):
        inp = bd.BoundInputs(d=1, t=0, r=0, delta_prime=0, e=(1, -s), reg=s, reg1=0, reg_sat=0, h0=s, B=2)
        led = bd.BoundLedger()
        bd.aux_bounds(inp, led)
        assert led.get("reg_bound_saturation") == s
        assert led.get("section_length_bound") == 2 * s * (s + 2)
        assert inp.poly(s) == 2 * s + 1


def test_ledger_marks_inapplicable():
    inp = bd.BoundInputs(d=2, t=0, r=1, delta_prime=0, e=(1, 0, 2))
    led = bd.build_ledger(inp)
    assert "top_coeff_bound_depth" in led.inapplicable and "reg_bound_saturation" in led.inapplicable
    assert all(int(v) >= 0 for v in led.to_json()["values"].values())


def test_ledger_r0_depth_bound_equals_adic_bound():
    for d in (1, 2, 3):
        for t in range(1, d + 1):
            led = bd.build_ledger(bd.BoundInputs(d=d, t=t, r=0, delta_prime=0, e=(3,) + (1,) * d))
            for j in range(d - t + 1, d + 1):
                assert led.get(f"top_coeff_bound_depth[{j}]") == led.get(f"top_coeff_bound_adic[{j}]")


def test_input_validation():
    with pytest.raises(MalformedInputError):
        bd.BoundInputs(d=2, t=3, r=0, delta_prime=0, e=(1, 0, 0))
    with pytest.raises(MalformedInputError):
        bd.BoundInputs(d=2, t=1, r=0, delta_prime=0, e=(1, 0))
    with pytest.raises(ResourceCeilingError):
        bd.reg_bound_from_coefficients(1, 0, 21)
    with pytest.raises(ResourceCeilingError):
        bd.reg_bound_from_coefficients(1000, 0, 12)


def test_binom_negative_upper():
    assert bd.binom(-1, 3) == -1
    assert bd.binom(-3, 2) == 6
    assert bd.binom(4, -1) == 0


def test_describe():
    assert bd.describe(254) == "254"
    assert bd.describe(4**1200 - 2) == "2.96e722 (723 digits)"
    assert bd.describe(-(10**20)) == "-1.00e20 (21 digits)"


def test_monotone_in_every_argument():
    rng = random.Random(3)
    for _ in range(150):
        d = rng.randint(1, 4)
        t = rng.randint(0, d)
        xi, r, dp = rng.randint(1, 6), rng.randint(0, 3), rng.randint(0, 3)
        assert bd.reg_bound_from_coefficients(xi, r, d) <= bd.reg_bound_from_coefficients(xi + 1, r, d)
        assert bd.reg_bound_from_coefficients(xi, r, d) <= bd.reg_bound_from_coefficients(xi, r + 1, d)
        assert bd.reg_bound_from_depth(xi, r, d, t) <= bd.reg_bound_from_depth(xi + 1, r, d, t)
        assert bd.reg_bound_from_depth(xi, r, d, t) <= bd.reg_bound_from_depth(xi, r + 1, d, t)
        assert bd.reg1_bound_explicit(xi, dp, d) <= bd.reg1_bound_explicit(xi, dp + 1, d)
        assert bd.reg1_bound_explicit(xi, dp, d) <= bd.reg1_bound_explicit(xi + 1, dp, d)
        i = rng.randint(2, 4)
        a, b = bd.coeff_bound_from_xi(xi, r, i), bd.coeff_bound_from_xi(xi + 1, r, i)
        assert a[0] <= b[0] and a[1] <= b[1]
        assert bd.coeff_bound_from_xi(xi, r, i)[0] <= bd.coeff_bound_from_xi(xi, r + 1, i)[0]
        B, reg = rng.randint(1, 9), rng.randint(0, 6)
        assert bd.coeff_bound_section_length_values(B, reg, i)[0] <= bd.coeff_bound_section_length_values(B + 1, reg, i)[0]
        assert bd.coeff_bound_section_length_values(B, reg, i)[0] <= bd.coeff_bound_section_length_values(B, reg + 1, i)[0]
        if t >= 1:
            j = rng.randint(d - t + 1, d)
            lo = bd.top_coeff_bounds(xi, r, d, t, j)
            assert lo.general <= bd.top_coeff_bounds(xi + 1, r, d, t, j).general
            assert lo.general <= bd.top_coeff_bounds(xi, r + 1, d, t, j).general


def test_explicit_reg1_bound_dominates_recurrence():
    rng = random.Random(77)
    for _ in range(200):
        d = rng.randint(1, 4)
        e = (rng.randint(1, 8),) + tuple(rng.randint(-8, 8) for _ in range(d - 1))
        dp = rng.randint(0, 4)
        xi = max([e[0]] + [abs(c) for c in e[1:]])
        _, rec = bd.reg1_recurrence(e, dp, d)
        assert rec <= bd.reg1_bound_explicit(xi, dp, d)


def test_big_value_is_fast():
    start = time.perf_counter()
    bd.reg_bound_from_depth(3, 0, 5, 1)
    assert time.perf_counter() - start < 0.01


def test_oversized_binomial_form_refused_quickly():
    start = time.perf_counter()
    with pytest.raises(ResourceCeilingError):
        bd.coeff_bound_from_xi(1, 0, 10)
    assert time.perf_counter() - start < 0.1
    assert len(str(bd.coeff_bound_from_xi(1, 0, 8)[0])) > 10_000
