"""Exact evaluation of the regularity and Hilbert-coefficient bounds.

Every bound is an exact Python integer.  Values grow like towers of
factorials in the dimension, so :func:`checked_power` refuses powers whose
result would exceed :data:`MAX_BITS` instead of exhausting memory.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .errors import MalformedInputError, ResourceCeilingError

MAX_DIMENSION = 20
MAX_BITS = 1 << 24

# Bounds are reported as exact decimal strings, which can run to millions of
# digits; the interpreter's default guard against slow int->str conversion
# would reject them.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)


def checked_power(base: int, exponent: int) -> int:
    if exponent < 0:
        raise MalformedInputError("negative exponent")
    if base >= 2 and exponent * math.log2(base) > MAX_BITS:
        raise ResourceCeilingError(f"{base}^{exponent} exceeds the {MAX_BITS}-bit ceiling")
    return base**exponent


def binom(a: int, b: int) -> int:
    """Binomial coefficient extended to negative upper index."""
    if b < 0:
        return 0
    if a >= 0:
        return math.comb(a, b)
    return (-1) ** b * math.comb(b - a - 1, b)


def _check_dim(d: int) -> None:
    if d < 1:
        raise MalformedInputError(f"bounds need d >= 1, got {d}")
    if d > MAX_DIMENSION:
        raise ResourceCeilingError(f"dimension {d} above the configured ceiling {MAX_DIMENSION}")


def reg1_recurrence(e: Sequence[int], delta_prime: int, d: int) -> tuple[list[int], int]:
    """The sequence m_1, ..., m_d and the reg^1 bound m_d - 1."""
    _check_dim(d)
    if len(e) < d:
        raise MalformedInputError(f"need e_0..e_{d - 1}, got {len(e)} coefficients")
    m = [e[0] + delta_prime]
    for i in range(2, d + 1):
        prev = m[-1]
        m.append(prev + sum((-1) ** k * e[k] * binom(prev + i - 2 - k, i - 1 - k) for k in range(i)))
    return m, m[-1] - 1


def reg1_bound_explicit(xi_dm1: int, delta_prime: int, d: int) -> int:
    _check_dim(d)
    return checked_power(xi_dm1 + delta_prime + 1, math.factorial(d)) - 2


def reg_bound_from_coefficients(xi_d: int, r: int, d: int) -> int:
    """Strict upper bound for reg G(F) in terms of all coefficients."""
    _check_dim(d)
    return checked_power(xi_d + r + 1, d * math.factorial(d) + 1) - 2


def reg_bound_from_depth(xi_dt: int, r: int, d: int, t: int) -> int:
    _check_dim(d)
    if not 0 <= t <= d:
        raise MalformedInputError(f"depth {t} outside [0, {d}]")
    return checked_power(xi_dt + r + 1, 2 * (d - t + 1) * math.factorial(d)) - 2


def coeff_bound_from_xi(e_or_xi: int, r: int, i: int) -> int | tuple[int, int]:
    """Upper bounds for (-1)^(i-1) e_i.

    ``i == 1`` takes ``e_0`` and returns C(e_0, 2).  For ``i >= 2`` it takes
    ``xi_{i-1}`` and returns the binomial form and the weaker power form.
    """
    if i < 1:
        raise MalformedInputError("coefficient index must be >= 1")
    if i == 1:
        return math.comb(e_or_xi, 2)
    base = e_or_xi + r + 1
    # C(base^(i!) + i, i) has about i * i! * log2(base) bits
    if i * math.factorial(i) * math.log2(base) > MAX_BITS:
        raise ResourceCeilingError(f"binomial bound for i = {i} exceeds the {MAX_BITS}-bit ceiling")
    sharp = e_or_xi * math.comb(checked_power(base, math.factorial(i)) + i, i)
    return sharp, checked_power(base, i * math.factorial(i) + 1)


@dataclass(frozen=True)
class TopCoeffBounds:
    general: int | None
    adic: int | None
    cm: int | None
    reason: str | None = None


def top_coeff_bounds(xi_dt: int, r: int, d: int, t: int, j: int, e0: int | None = None) -> TopCoeffBounds:
    """Bounds for |e_j|, d - t + 1 <= j <= d.

    ``general`` allows any r, ``adic`` is the r = 0 form and ``cm`` the Cohen-Macaulay form
    (t = d, base e_0 + r + 1); either is ``None`` when it does not apply.
    """
    _check_dim(d)
    if t == 0:
        return TopCoeffBounds(None, None, None, "requires t >= 1")
    if not d - t + 1 <= j <= d:
        raise MalformedInputError(f"j = {j} outside [{d - t + 1}, {d}]")
    fj = math.factorial(j)
    exponent = 3 * j * (d + 1 - t) * fj
    thm = checked_power(xi_dt + r + 1, exponent)
    cor = checked_power(xi_dt + 1, exponent)
    cm = None
    if t == d:
        cm = checked_power((xi_dt if e0 is None else e0) + r + 1, 3 * fj - j + 1)
    return TopCoeffBounds(thm, cor, cm)


def coeff_bound_section_length_values(B: int, reg: int, i: int, reg1: int | None = None) -> tuple[int, int | None]:
    """(B(2 reg + 2)^i, B(reg^1 + 1)^i); the second is ``None`` without reg^1."""
    if B < 1 or reg < 0 or i < 1:
        raise MalformedInputError("need B >= 1, reg >= 0, i >= 1")
    prop_b = B * checked_power(2 * reg + 2, i)
    prop_a = None if reg1 is None else B * checked_power(reg1 + 1, i)
    return prop_b, prop_a


@dataclass(frozen=True)
class BoundInputs:
    d: int
    t: int
    r: int
    delta_prime: int
    e: tuple[int, ...]
    reg: int | None = None
    reg1: int | None = None
    reg_sat: int | None = None
    h0: int | None = None
    B: int | None = None

    def __post_init__(self) -> None:
        _check_dim(self.d)
        if not 0 <= self.t <= self.d:
            raise MalformedInputError(f"depth {self.t} outside [0, {self.d}]")
        if self.r < 0 or self.delta_prime < 0:
            raise MalformedInputError("r and delta' must be non-negative")
        if len(self.e) != self.d + 1:
            raise MalformedInputError(f"need e_0..e_{self.d}")

    def xi(self, s: int) -> int:
        return max([self.e[0]] + [abs(c) for c in self.e[1:s + 1]])

    def poly(self, t: int) -> int:
        d = self.d
        return sum((-1) ** i * c * binom(t + d - i, d - i) for i, c in enumerate(self.e))


@dataclass
class BoundLedger:
    values: dict[str, int] = field(default_factory=dict)
    inapplicable: dict[str, str] = field(default_factory=dict)

    def set(self, name: str, value: int) -> None:
        self.values[name] = value

    def skip(self, name: str, reason: str) -> None:
        self.inapplicable[name] = reason

    def get(self, name: str) -> int | None:
        return self.values.get(name)

    def to_json(self) -> dict:
        return {
            "values": {k: str(v) for k, v in sorted(self.values.items())},
            "inapplicable": dict(sorted(self.inapplicable.items())),
        }


def aux_bounds(inp: BoundInputs, ledger: BoundLedger) -> None:
    """Bounds that need reg, h^0 or B, which only a computed report supplies."""
    d = inp.d
    if inp.reg_sat is not None and inp.h0 is not None:
        ledger.set("reg_bound_saturation", max(inp.reg_sat, inp.r) + inp.h0)
        ledger.set("h0_below_polynomial", inp.poly(inp.reg_sat))
    else:
        reason = "requires reg of the saturated associated graded module"
        ledger.skip("reg_bound_saturation", reason)
        ledger.skip("h0_below_polynomial", reason)
    if inp.reg is None:
        for i in range(d):
            ledger.skip(f"section_h0_bound[{i}]", "requires reg G(F)")
        ledger.skip("section_length_bound", "requires reg G(F)")
        return
    core = inp.xi(d) * checked_power(inp.reg + 2, d)
    for i in range(d):
        ledger.set(f"section_h0_bound[{i}]", (i + 1) * core)
    ledger.set("section_length_bound", (d + 1) * core)


def build_ledger(inp: BoundInputs) -> BoundLedger:
    led = BoundLedger()
    d, t, r = inp.d, inp.t, inp.r
    if inp.reg1 is not None or inp.reg is not None:
        _, triv = reg1_recurrence(inp.e, inp.delta_prime, d)
        led.set("reg1_recurrence_bound", triv)
        led.set("reg1_explicit_bound", reg1_bound_explicit(inp.xi(d - 1), inp.delta_prime, d))
    else:
        led.skip("reg1_recurrence_bound", "requires reg^1 of the associated graded module")
        led.skip("reg1_explicit_bound", "requires reg^1 of the associated graded module")
    led.set("reg_bound_coefficients", reg_bound_from_coefficients(inp.xi(d), r, d))
    led.set("reg_bound_depth", reg_bound_from_depth(inp.xi(d - t), r, d, t))
    led.set("e1_bound_multiplicity", coeff_bound_from_xi(inp.e[0], r, 1))
    for i in range(2, d + 1):
        sharp, weak = coeff_bound_from_xi(inp.xi(i - 1), r, i)
        led.set(f"coeff_bound_binomial[{i}]", sharp)
        led.set(f"coeff_bound_power[{i}]", weak)
    if t == 0:
        led.skip("top_coeff_bound_depth", "requires t >= 1")
        led.skip("top_coeff_bound_adic", "requires t >= 1")
    for j in range(d - t + 1, d + 1) if t >= 1 else ():
        vals = top_coeff_bounds(inp.xi(d - t), r, d, t, j, e0=inp.e[0])
        led.set(f"top_coeff_bound_depth[{j}]", vals.general)
        if r == 0:
            led.set(f"top_coeff_bound_adic[{j}]", vals.adic)
        else:
            led.skip(f"top_coeff_bound_adic[{j}]", "requires the I-adic filtration (r = 0)")
        if vals.cm is not None:
            led.set(f"top_coeff_bound_cm[{j}]", vals.cm)
    if inp.B is not None and inp.reg is not None:
        for i in range(1, d + 1):
            prop_b, prop_a = coeff_bound_section_length_values(inp.B, inp.reg, i, inp.reg1)
            led.set(f"coeff_bound_section_length[{i}]", prop_b)
            if i <= d - 1 and prop_a is not None:
                led.set(f"graded_coeff_bound_reg1[{i}]", prop_a)
    else:
        led.skip("coeff_bound_section_length", "requires B and reg G(F)")
        led.skip("graded_coeff_bound_reg1", "requires B and reg^1")
    aux_bounds(inp, led)
    return led


def describe(value: int) -> str:
    """Scientific rendering with exact digit count, e.g. ``2.96e722 (723 digits)``."""
    s = str(abs(value))
    sign = "-" if value < 0 else ""
    if len(s) <= 12:
        return sign + s
    return f"{sign}{s[0]}.{s[1:3]}e{len(s) - 1} ({len(s)} digits)"
