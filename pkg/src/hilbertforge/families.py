"""Two reference families with closed-form invariants.

``embedded_line(s)`` is ``(x^2, x y^s)`` in two variables: a line with an
embedded point whose socle sits in degrees ``1..s``.  Its ``m``-adic data
are ``reg = h^0 = s``, ``e = (1, -s)``, ``B = 2`` and depth 0.

``embedded_flat(d, s)`` is ``(x_1^2, x_1 x_2, ..., x_1 x_d, x_1 x_{d+1}^s)``
in ``d + 1`` variables, of dimension ``d`` with ``e = (1, 0, ..., 0, (-1)^d s)``.
For ``d = 1`` it coincides with ``embedded_line(s)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hilbert import FiltrationSpec
from .monomial import MonomialIdeal, RingSpec


def embedded_line(s: int) -> FiltrationSpec:
    return embedded_flat(1, s)


def embedded_flat(d: int, s: int) -> FiltrationSpec:
    if d < 1 or s < 1:
        raise ValueError("need d >= 1 and s >= 1")
    n = d + 1
    gens = [(2,) + (0,) * d]
    for k in range(1, d):
        gens.append(tuple(1 if i in (0, k) else 0 for i in range(n)))
    gens.append((1,) + (0,) * (d - 1) + (s,))
    return FiltrationSpec.adic(RingSpec(n), MonomialIdeal.of(n, gens))


@dataclass(frozen=True)
class FamilyResult:
    name: str
    passed: bool
    summary: str
    mismatches: tuple[str, ...]


def _compare(expected: dict, got: dict) -> tuple[str, ...]:
    return tuple(f"{k}: expected {v}, got {got.get(k)}" for k, v in expected.items() if got.get(k) != v)


def run_embedded_line(s: int) -> FamilyResult:
    from .verifier import verify_case

    rep, _, verdict = verify_case(embedded_line(s))
    tight = verdict.by_name()["reg_bound_saturation"]
    got = {"reg": rep.reg, "e": tuple(rep.e), "h0": rep.h0, "B": rep.B, "t": rep.t, "d": rep.d,
           "reg_bound_saturation margin": tight.margin}
    want = {"reg": s, "e": (1, -s), "h0": s, "B": 2, "t": 0, "d": 1, "reg_bound_saturation margin": 0}
    bad = _compare(want, got) + tuple(f"check failed: {c.name}" for c in verdict.failures)
    summary = f"reg = {rep.reg} = s  e = {tuple(rep.e)}  h0 = {rep.h0}  B = {rep.B}  depth = {rep.t}"
    return FamilyResult(f"embedded line s={s}", not bad, summary, bad)


def run_embedded_flat(d: int, s: int) -> FamilyResult:
    from .verifier import verify_case

    rep, _, verdict = verify_case(embedded_flat(d, s))
    want_e = (1,) + (0,) * (d - 1) + ((-1) ** d * s,)
    bad = _compare({"e": want_e, "d": d}, {"e": tuple(rep.e), "d": rep.d})
    if verdict.by_name()["reg_bound_coefficients"].status != "pass":
        bad += ("reg_bound_coefficients did not pass",)
    bad += tuple(f"check failed: {c.name}" for c in verdict.failures)
    summary = f"e = {tuple(rep.e)}  reg = {rep.reg}  h0 = {rep.h0}  reg_bound_coefficients margin = {verdict.by_name()['reg_bound_coefficients'].margin}"
    return FamilyResult(f"embedded flat d={d} s={s}", not bad, summary, bad)
