"""Per-case analysis and exact verification of every applicable bound and identity.

Regime A is the maximal-ideal-adic filtration of ``M = R/Q``: its associated
graded module is ``R/Q`` itself, so reg, reg^1, B and the h^0 chain of the
associated graded module are computed exactly and the Hilbert polynomial fit
starts at the proven stabilization index reg.  Every other filtration is
Regime B: the coefficients come from an empirically stabilized fit and all
checks built on them are reported as ``uncertified`` rather than ``pass``.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

from . import bounds as bd
from .errors import (
    CertificationError,
    ResourceCeilingError,
    StabilizationError,
    UnitIdealError,
    UnsupportedCaseError,
)
from .hilbert import (
    FiltrationSpec,
    expand_series,
    fit_coefficients,
    fit_filtration,
    hilbert_samuel_values,
    series_numerator,
)
from .invariants import homological_profile, monomial_betti, section_chain
from .linalg import CHECK_PRIME, DEFAULT_PRIME
from .monomial import MonomialIdeal, RingSpec, hilbert_function, krull_dim, saturate

log = logging.getLogger(__name__)

DEFAULT_PRIMES = (DEFAULT_PRIME, CHECK_PRIME)
SERIES_CHECK_DEGREE = 12
REGIME_B_WINDOW_CEILING = 60
REGIME_B_NOTE = "Regime B: Hilbert coefficients are guard-certified, not proved"


@dataclass
class InvariantReport:
    n: int
    regime: str
    d: int
    t: int
    pd: int
    r: int
    h0: int
    e: tuple[int, ...]
    e_bar: tuple[int, ...]
    xi: tuple[int, ...]
    postulation: int
    certificate: str
    hs_values: list[int]
    hf_enumerated: list[int]
    hf_series: list[int]
    series_numerator: list[int]
    euler_numerator: list[int]
    betti: list[list[int]]
    reg: int | None = None
    reg1: int | None = None
    reg_sat: int | None = None
    B: int | None = None
    h0_chain: list[int] | None = None
    h0_graded: int | None = None
    e_graded: tuple[int, ...] | None = None
    seeds: list[list[int]] = field(default_factory=list)
    primes: tuple[int, ...] = DEFAULT_PRIMES
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = asdict(self)
        for k in ("e", "e_bar", "xi", "e_graded", "primes"):
            if out[k] is not None:
                out[k] = list(out[k])
        return out

    def P(self, t: int) -> int:
        d = self.d
        return sum((-1) ** i * c * bd.binom(t + d - i, d - i) for i, c in enumerate(self.e))


def analyze_case(f: FiltrationSpec, primes: tuple[int, ...] = DEFAULT_PRIMES, seed: int = 0) -> InvariantReport:
    Q = f.Q
    n = f.ring.n
    d = krull_dim(Q)
    if d == 0:
        raise UnsupportedCaseError("dim M = 0; every result assumes d >= 1")
    flags: list[str] = []
    regime = "A" if f.is_maximal_adic else "B"

    tables = [monomial_betti(Q, p) for p in primes]
    if any(t != tables[0] for t in tables[1:]):
        flags.append("characteristic-sensitive: Betti tables differ between primes")
    betti = tables[0]
    sat = saturate(Q)
    sat_betti = monomial_betti(sat, primes[0])
    prof = homological_profile(betti, n, sat_betti)

    # h^0 = number of standard monomials of Q that lie in sat(Q); none above reg
    h0 = sum(hilbert_function(Q, j) - hilbert_function(sat, j) for j in range(prof.reg + 2))

    chains = [section_chain(Q, d, seed, RingSpec(n, p), prof.reg) for p in primes]
    chain = chains[0]
    for c in chains:
        flags.extend(f"p={c.p}: {msg}" for msg in c.flags)
    if any((c.B, c.h0_chain) != (chain.B, chain.h0_chain) for c in chains[1:]):
        flags.append("characteristic-sensitive: section chain differs between primes")
    t = chain.depth

    if regime == "A":
        fit, values = fit_filtration(f, d, n0=prof.reg)
        fit_bar, _ = fit_filtration(f.saturated(), d, n0=sat_betti.reg)
        guard = d + 5
        graded_values = [hilbert_function(Q, j) for j in range(prof.reg + 1 + d + guard + 1)]
        graded = fit_coefficients(graded_values, d, "graded", n0=prof.reg + 1)
        e_graded = graded.e
    else:
        fit, values = fit_filtration(f, d)
        fit_bar, _ = fit_filtration(f.saturated(), d)
        e_graded = None
        # extend the window so the postulation consequence can be checked when the bound is small
        reach = bd.reg_bound_from_depth(fit.xi(d - t), f.r, d, t) + d + 5
        if len(values) <= reach <= REGIME_B_WINDOW_CEILING:
            values = hilbert_samuel_values(f, reach)

    hf_enum = [hilbert_function(Q, j) for j in range(SERIES_CHECK_DEGREE + 1)]
    numer = series_numerator(Q)
    hf_series = expand_series(numer, n, SERIES_CHECK_DEGREE)

    rep = InvariantReport(
        n=n,
        regime=regime,
        d=d,
        t=t,
        pd=prof.pd,
        r=f.r,
        h0=h0,
        e=fit.e,
        e_bar=fit_bar.e,
        xi=tuple(fit.xi(s) for s in range(d + 1)),
        postulation=fit.postulation,
        certificate=fit.certificate,
        hs_values=values,
        hf_enumerated=hf_enum,
        hf_series=hf_series,
        series_numerator=numer,
        euler_numerator=betti.euler_numerator(),
        betti=betti.to_json(),
        seeds=chain.seeds,
        primes=tuple(primes),
        flags=flags,
        h0_graded=chain.h0_chain[0] if chain.h0_chain else None,
    )
    if regime == "A":
        rep.reg = prof.reg
        rep.reg1 = prof.reg1
        rep.reg_sat = sat_betti.reg
        rep.B = chain.B
        rep.h0_chain = list(chain.h0_chain)
        rep.e_graded = e_graded
    else:
        rep.flags.append("reg G(F) and B not computed outside the maximal-ideal-adic case")
    return rep


# --- verdicts ---------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    status: str  # pass | fail | inapplicable | uncertified
    lhs: str | None = None
    rhs: str | None = None
    relation: str | None = None
    margin: int | None = None
    reason: str | None = None

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def margin(lhs: int, rhs: int) -> int | None:
    """floor(log2(rhs / max(lhs, 1))), or ``None`` when rhs < 1."""
    if rhs < 1:
        return None
    a, b = rhs, max(lhs, 1)
    k = a.bit_length() - b.bit_length()
    if k >= 0:
        return k if (b << k) <= a else k - 1
    return k if (a << -k) >= b else k - 1


_RELATIONS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    "==": lambda a, b: a == b,
}


def _compare(name: str, lhs: int, rel: str, rhs: int, uncertified: str | None = None) -> Check:
    ok = _RELATIONS[rel](lhs, rhs)
    status = "pass" if ok else "fail"
    reason = None
    if ok and uncertified:
        status, reason = "uncertified", uncertified
    return Check(
        name=name,
        status=status,
        lhs=str(lhs),
        rhs=str(rhs),
        relation=rel,
        margin=margin(lhs, rhs) if rel != "==" else None,
        reason=reason,
    )


def _skip(name: str, reason: str) -> Check:
    return Check(name=name, status="inapplicable", reason=reason)


def bound_inputs(rep: InvariantReport) -> bd.BoundInputs:
    return bd.BoundInputs(
        d=rep.d,
        t=rep.t,
        r=rep.r,
        delta_prime=0,
        e=tuple(rep.e),
        reg=rep.reg,
        reg1=rep.reg1,
        reg_sat=rep.reg_sat,
        h0=rep.h0,
        B=rep.B,
    )


def check_inequalities(rep: InvariantReport, ledger: bd.BoundLedger) -> list[Check]:
    d, t = rep.d, rep.t
    e = rep.e
    unc = REGIME_B_NOTE if rep.regime == "B" else None
    out: list[Check] = []
    led = ledger.values

    def cmp(name: str, lhs: int, rel: str, key: str | None = None) -> None:
        key = key or name
        if key in led:
            out.append(_compare(name, lhs, rel, led[key], unc))
        else:
            out.append(_skip(name, ledger.inapplicable.get(key.split("[")[0], "bound not in ledger")))

    if rep.reg is not None:
        if rep.reg1 is not None:
            cmp("reg1_recurrence_bound", rep.reg1, "<=")
            cmp("reg1_explicit_bound", rep.reg1, "<=")
            out.append(_compare("reg1_explicit_dominates_recurrence", led["reg1_recurrence_bound"], "<=", led["reg1_explicit_bound"]))
        cmp("reg_bound_coefficients", rep.reg, "<")
        cmp("reg_bound_depth", rep.reg, "<=")
        cmp("reg_bound_saturation", rep.reg, "<=")
        cmp("h0_below_polynomial", rep.h0, "<=")
        for i, h in enumerate(rep.h0_chain or []):
            cmp(f"section_h0_bound[{i}]", h, "<=")
        cmp("section_length_bound", rep.B, "<")
        for i in range(1, d + 1):
            cmp(f"coeff_bound_section_length[{i}]", abs(e[i]), "<")
        for i in range(1, d):
            if rep.e_graded is not None:
                cmp(f"graded_coeff_bound_reg1[{i}]", abs(rep.e_graded[i]), "<=")
    else:
        for name in ("reg1_recurrence_bound", "reg1_explicit_bound", "reg_bound_coefficients", "reg_bound_depth", "reg_bound_saturation",
                     "h0_below_polynomial", "section_h0_bound", "section_length_bound", "graded_coeff_bound_reg1", "coeff_bound_section_length"):
            out.append(_skip(name, "requires reg G(F), only available in Regime A"))
        out.append(_polynomial_beyond_bound_check(rep, led["reg_bound_depth"]))

    cmp("e1_bound_multiplicity", e[1], "<=")
    for i in range(2, d + 1):
        lhs = (-1) ** (i - 1) * e[i]
        cmp(f"coeff_bound_binomial[{i}]", lhs, "<=")
        cmp(f"coeff_bound_power[{i}]", lhs, "<")
        if f"coeff_bound_binomial[{i}]" in led:
            out.append(_compare(
                f"coeff_bound_binomial_below_power[{i}]", led[f"coeff_bound_binomial[{i}]"], "<", led[f"coeff_bound_power[{i}]"]
            ))
    if t >= 1:
        for j in range(d - t + 1, d + 1):
            cmp(f"top_coeff_bound_depth[{j}]", abs(e[j]), "<=")
            cmp(f"top_coeff_bound_adic[{j}]", abs(e[j]), "<")
            if t == d:
                cmp(f"top_coeff_bound_cm[{j}]", abs(e[j]), "<=")
    else:
        out.append(_skip("top_coeff_bound_depth", "requires t >= 1"))
        out.append(_skip("top_coeff_bound_adic", "requires t >= 1"))
    if t == d:
        out.append(_compare("cm_e1_nonnegative", 0, "<=", e[1], unc))
        if d >= 2:
            out.append(_compare("cm_e2_nonnegative", 0, "<=", e[2], unc))
        else:
            out.append(_skip("cm_e2_nonnegative", "requires d >= 2"))
    else:
        out.append(_skip("cm_e1_nonnegative", "requires a Cohen-Macaulay module (t = d)"))
        out.append(_skip("cm_e2_nonnegative", "requires a Cohen-Macaulay module (t = d)"))
    return out


def _polynomial_beyond_bound_check(rep: InvariantReport, reg_bound: int) -> Check:
    name = "polynomial_beyond_reg_bound"
    last = len(rep.hs_values) - 1
    if reg_bound > last:
        return _skip(name, f"depth regularity bound {bd.describe(reg_bound)} beyond computed window n <= {last}")
    bad = [k for k in range(max(reg_bound, 0), last + 1) if rep.hs_values[k] != rep.P(k)]
    return Check(
        name=name,
        status="fail" if bad else "uncertified",
        lhs=str(len(bad)),
        rhs="0",
        relation="==",
        reason=None if bad else REGIME_B_NOTE,
    )


def check_identities(rep: InvariantReport) -> list[Check]:
    d = rep.d
    unc = REGIME_B_NOTE if rep.regime == "B" else None
    out = [
        _compare("h0_from_top_coefficient", rep.h0, "==", (-1) ** d * (rep.e[d] - rep.e_bar[d]), unc),
        _compare("saturation_keeps_lower_coefficients", sum(a != b for a, b in zip(rep.e[:d], rep.e_bar[:d])), "==", 0, unc),
        _compare("auslander_buchsbaum", rep.t + rep.pd, "==", rep.n),
        _compare("hilbert_series_equivalence",
                 sum(a != b for a, b in zip(rep.hf_enumerated, rep.hf_series)), "==", 0),
        _compare("euler_characteristic", int(rep.euler_numerator != rep.series_numerator), "==", 0),
        _compare("depth_zero_iff_h0", int((rep.t == 0) != (rep.h0 > 0)), "==", 0),
    ]
    if rep.h0_graded is not None:
        out.append(_compare("h0_two_routes", rep.h0_graded, "==", rep.h0))
    if rep.reg is not None:
        window = range(rep.reg, rep.reg + d + 6)
        bad = sum(rep.hs_values[k] != rep.P(k) for k in window)
        out.append(_compare("polynomial_from_reg", bad, "==", 0))
        out.append(_compare("postulation_at_most_reg", rep.postulation, "<=", rep.reg))
        out.append(_compare("regularity_of_saturation", rep.reg_sat, "<=", rep.reg))
        if rep.e_graded is not None:
            out.append(_compare("graded_local_consistency",
                                sum(a != b for a, b in zip(rep.e[:d], rep.e_graded)), "==", 0))
    else:
        out.append(_skip("polynomial_from_reg", "requires reg G(F)"))
    sensitive = [f for f in rep.flags if f.startswith("characteristic-sensitive")]
    if sensitive:
        out.append(Check("characteristic_independence", "uncertified", reason="; ".join(sensitive)))
    else:
        out.append(Check("characteristic_independence", "pass", reason=None))
    return out


@dataclass
class Verdict:
    checks: list[Check]

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failures

    def by_name(self) -> dict[str, Check]:
        return {c.name: c for c in self.checks}

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in sorted(self.checks, key=lambda c: c.name)]


def verify_report(rep: InvariantReport) -> tuple[bd.BoundLedger, Verdict]:
    ledger = bd.build_ledger(bound_inputs(rep))
    checks = check_inequalities(rep, ledger) + check_identities(rep)
    names = [c.name for c in checks]
    assert len(names) == len(set(names)), "duplicate check names"
    return ledger, Verdict(checks)


def verify_case(f: FiltrationSpec, primes: tuple[int, ...] = DEFAULT_PRIMES, seed: int = 0,
                mutate: Callable[[InvariantReport], None] | None = None):
    rep = analyze_case(f, primes, seed)
    if mutate is not None:
        mutate(rep)
    ledger, verdict = verify_report(rep)
    return rep, ledger, verdict


# --- finiteness of Hilbert-Samuel functions ----------------------------------

def hilbert_samuel_signature(rep: InvariantReport) -> tuple:
    """The Hilbert-Samuel function as (polynomial coefficients, values before postulation)."""
    return tuple(rep.e), tuple(rep.hs_values[: rep.postulation])


def _bound_reaches(count: int, factors: Iterable[int]) -> bool:
    prod = 1
    for f in factors:
        prod *= f
        if prod >= count:
            return True
    return prod >= count


def finiteness_check(reports: Iterable[InvariantReport]) -> list[Check]:
    """Consequence check for finiteness of Hilbert-Samuel functions.

    Reports of I-adic filtrations are grouped by (d, t); the cap is the
    largest xi_{d-t} seen.  Every member must have its remaining
    coefficients within the r = 0 adic bound and its postulation within the
    regularity bound, and the number of distinct functions must not exceed
    the count those bounds allow.
    """
    groups: dict[tuple[int, int], list[InvariantReport]] = {}
    for rep in reports:
        if rep.r == 0:
            groups.setdefault((rep.d, rep.t), []).append(rep)
    out = []
    for (d, t), reps in sorted(groups.items()):
        cap = max(rep.xi[d - t] for rep in reps)
        a = bd.reg_bound_from_depth(cap, 0, d, t)
        coeff_caps = [bd.top_coeff_bounds(cap, 0, d, t, j).adic for j in range(d - t + 1, d + 1)]
        bad = 0
        for rep in reps:
            tail = [abs(rep.e[j]) for j in range(d - t + 1, d + 1)]
            if any(v >= c for v, c in zip(tail, coeff_caps)) or rep.postulation > a:
                bad += 1
        distinct = len({hilbert_samuel_signature(rep) for rep in reps})
        factors = [cap] + [2 * cap + 1] * (d - t) + [2 * c - 1 for c in coeff_caps] + [a + 1]
        name = f"finitely_many_functions[d={d},t={t}]"
        if bad:
            out.append(Check(name, "fail", lhs=str(bad), rhs="0", relation="==",
                             reason="member outside the coefficient or postulation bounds"))
        else:
            ok = _bound_reaches(distinct, factors)
            out.append(Check(name, "pass" if ok else "fail", lhs=str(distinct), reason=(
                f"{len(reps)} functions, {distinct} distinct; the enumeration bound "
                + ("covers them" if ok else "is smaller")
            )))
    return out


# --- fuzzing --------------------------------------------------------------------

@dataclass
class FuzzParams:
    n_max: int = 4
    deg_max: int = 6
    gen_max: int = 4
    count: int = 500
    seed: int = 42
    filtrations: bool = False
    primes: tuple[int, ...] = DEFAULT_PRIMES


@dataclass
class FuzzFailure:
    case: FiltrationSpec
    original: FiltrationSpec
    failed: list[str]
    error: str | None = None


@dataclass
class FuzzResult:
    reports: list[InvariantReport]
    failures: list[FuzzFailure]
    skipped: list[tuple[int, str]]
    errors: list[tuple[int, str]]
    extra_checks: list[Check] = field(default_factory=list)


def random_case(rng, params: FuzzParams) -> FiltrationSpec | None:
    """Draw one case; returns ``None`` when the draw is degenerate (unit ideal)."""
    n = rng.randint(2, params.n_max) if params.n_max >= 2 else 1
    gens = []
    for _ in range(rng.randint(1, params.gen_max)):
        deg = rng.randint(0 if rng.random() < 0.02 else 1, params.deg_max)
        u = [0] * n
        for _ in range(deg):
            u[rng.randrange(n)] += 1
        gens.append(tuple(u))
    Q = MonomialIdeal.of(n, gens)
    if Q.is_unit:
        return None
    ring = RingSpec(n)
    if not params.filtrations or n > 3 or rng.random() < 0.5:
        return FiltrationSpec.adic(ring, Q)
    J = MonomialIdeal.of(n, [tuple(rng.randint(1, 2) if i == k else 0 for i in range(n)) for k in range(n)])
    if rng.random() < 0.5:
        return FiltrationSpec.adic(ring, Q, J)
    base = J + Q
    extra = [u for u in ((1,) + (0,) * (n - 1), (0,) * (n - 1) + (1,)) if not base.contains(u)]
    if not extra:
        return FiltrationSpec.adic(ring, Q, J)
    n1 = base + MonomialIdeal.of(n, [rng.choice(extra)])
    return FiltrationSpec(ring, Q, J, (MonomialIdeal.unit(n), n1))


def _failing(f: FiltrationSpec, params: FuzzParams, mutate) -> list[str] | None:
    """Names of failed checks, ``None`` when the case cannot be evaluated."""
    try:
        _, _, verdict = verify_case(f, params.primes, 0, mutate)
    except (UnsupportedCaseError, UnitIdealError, ResourceCeilingError):
        return None
    except Exception as exc:  # noqa: BLE001 - crashes are failures too
        return [f"exception: {type(exc).__name__}"]
    return [c.name for c in verdict.failures]


def _shrink_candidates(f: FiltrationSpec) -> Iterable[FiltrationSpec]:
    gens = list(f.Q.gens)
    n = f.ring.n
    J = f.J
    for k in range(len(gens)):
        rest = gens[:k] + gens[k + 1:]
        yield from _try_spec(f, MonomialIdeal.of(n, rest) if rest else MonomialIdeal.zero(n), J)
    for k, g in enumerate(gens):
        for v in range(n):
            if g[v]:
                smaller = g[:v] + (g[v] - 1,) + g[v + 1:]
                yield from _try_spec(f, MonomialIdeal.of(n, gens[:k] + [smaller] + gens[k + 1:]), J)


def _try_spec(f: FiltrationSpec, Q: MonomialIdeal, J: MonomialIdeal) -> Iterable[FiltrationSpec]:
    if Q.is_unit:
        return
    try:
        if f.initial:
            yield FiltrationSpec(f.ring, Q, J, (f.initial[0],) + tuple(nk + Q for nk in f.initial[1:]))
        else:
            yield FiltrationSpec(f.ring, Q, J)
    except Exception:  # noqa: BLE001 - invalid shrink candidates are simply skipped
        return


def shrink(f: FiltrationSpec, params: FuzzParams, mutate=None, budget: int = 200) -> FiltrationSpec:
    """Greedy shrink: drop generators, then lower exponents, while some check still fails."""
    current = f
    progress = True
    while progress and budget > 0:
        progress = False
        for cand in _shrink_candidates(current):
            budget -= 1
            if _failing(cand, params, mutate):
                current = cand
                progress = True
                break
            if budget <= 0:
                break
    return current


def fuzz(params: FuzzParams, mutate: Callable[[InvariantReport], None] | None = None) -> FuzzResult:
    import random

    reports, failures, skipped, errors = [], [], [], []
    for idx in range(params.count):
        rng = random.Random(f"{params.seed}:{idx}")
        f = random_case(rng, params)
        if f is None:
            skipped.append((idx, "degenerate draw: unit ideal"))
            continue
        try:
            rep, _, verdict = verify_case(f, params.primes, 0, mutate)
        except UnsupportedCaseError as exc:
            skipped.append((idx, str(exc)))
            continue
        except (ResourceCeilingError, CertificationError, StabilizationError) as exc:
            errors.append((idx, f"{type(exc).__name__}: {exc}"))
            continue
        except Exception as exc:  # noqa: BLE001 - a crash is a failing case
            failures.append(FuzzFailure(shrink(f, params, mutate), f,
                                        [f"exception: {type(exc).__name__}"], error=str(exc)))
            continue
        reports.append(rep)
        if not verdict.ok:
            small = shrink(f, params, mutate)
            failures.append(FuzzFailure(small, f, [c.name for c in verdict.failures]))
            log.warning("fuzz case %d failed %s", idx, [c.name for c in verdict.failures])
    extra = finiteness_check(reports)
    return FuzzResult(reports, failures, skipped, errors, extra)
