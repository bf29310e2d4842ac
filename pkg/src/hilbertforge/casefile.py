"""Plain-text case files.

Grammar (EBNF)::

    casefile  = { line } ;
    line      = [ entry ] [ comment ] "\\n" ;
    comment   = "#" { character } ;
    entry     = key "=" value ;
    key       = "n" | "primes" | "seed" | "label" | "r" | "Q" | "J"
              | "N" digit { digit } | "expect." name ;
    value     = ideal | integer-list | text ;
    ideal     = "m" | "0" | "1" | { monomial } ;
    monomial  = "[" integer { "," integer } "]" ;

``n`` is required.  ``Q`` defaults to the zero ideal (an empty value also
means zero), ``J`` to the maximal ideal ``m``.  ``N1 .. Nr`` give the
initial chain of a non-adic filtration (``N0`` is always the unit ideal);
``r``, when present, must equal the length of that chain.  ``expect.<field>``
pins a report field for regression checks, e.g. ``expect.reg = 2`` or
``expect.e = 1, -2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FiltrationError, MalformedInputError
from .hilbert import FiltrationSpec
from .monomial import MonomialIdeal, RingSpec
from .verifier import DEFAULT_PRIMES

EXPECTABLE = {
    "d", "t", "pd", "r", "h0", "reg", "reg1", "reg_sat", "B", "postulation", "e", "e_bar", "h0_chain",
}
_SCALAR_KEYS = {"n", "primes", "seed", "label", "r", "Q", "J"}
_MONOMIAL = re.compile(r"\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]")


class CaseFileError(MalformedInputError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None, col: int | None = None):
        where = ":".join(str(x) for x in (path, line, col) if x is not None)
        super().__init__(f"{where}: {message}" if where else message)
        self.path, self.line, self.col = path, line, col


@dataclass
class CaseFile:
    spec: FiltrationSpec
    label: str = ""
    primes: tuple[int, ...] = DEFAULT_PRIMES
    seed: int = 0
    expected: dict[str, object] = field(default_factory=dict)
    path: str | None = None


def _parse_ideal(text: str, n: int, err) -> MonomialIdeal:
    text = text.strip()
    if text in ("", "0"):
        return MonomialIdeal.zero(n)
    if text == "1":
        return MonomialIdeal.unit(n)
    if text == "m":
        return MonomialIdeal.maximal(n)
    gens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _MONOMIAL.match(text, pos)
        if not m:
            raise err(f"expected a monomial like [2,0] at {text[pos:pos + 12]!r}", pos)
        u = tuple(int(x) for x in m.group(1).split(","))
        if len(u) != n:
            raise err(f"monomial {list(u)} has {len(u)} exponents, ring has n = {n}", pos)
        if min(u) < 0:
            raise err(f"negative exponent in {list(u)}", pos)
        gens.append(u)
        pos = m.end()
    return MonomialIdeal.of(n, gens)


def _parse_ints(text: str, err) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise err(f"expected integers, got {text!r}", 0) from None


def parse_text(text: str, path: str | None = None) -> CaseFile:
    entries: dict[str, tuple[str, int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if "=" not in line:
            raise CaseFileError("expected 'key = value'", path, lineno, 1)
        key, value = line.split("=", 1)
        col = len(key) - len(key.lstrip()) + 1
        key = key.strip()
        vcol = line.index("=") + 2 + (len(value) - len(value.lstrip()))
        if not (key in _SCALAR_KEYS or re.fullmatch(r"N[1-9]\d*", key) or key.startswith("expect.")):
            raise CaseFileError(f"unknown key {key!r}", path, lineno, col)
        if key.startswith("expect.") and key[7:] not in EXPECTABLE:
            raise CaseFileError(f"cannot pin unknown report field {key[7:]!r}", path, lineno, col)
        if key in entries:
            raise CaseFileError(f"duplicate key {key!r} (first on line {entries[key][1]})", path, lineno, col)
        entries[key] = (value.strip(), lineno, vcol)

    def err_for(key: str):
        _, lineno, vcol = entries[key]
        return lambda msg, off: CaseFileError(msg, path, lineno, vcol + off)

    if "n" not in entries:
        raise CaseFileError("missing required key 'n'", path, 1, 1)
    ns = _parse_ints(entries["n"][0], err_for("n"))
    if len(ns) != 1 or ns[0] < 1:
        raise err_for("n")("n must be a single integer >= 1", 0)
    n = ns[0]
    primes = DEFAULT_PRIMES
    if "primes" in entries:
        primes = tuple(_parse_ints(entries["primes"][0], err_for("primes")))
        try:
            for p in primes:
                RingSpec(n, p)
        except MalformedInputError as exc:
            raise err_for("primes")(str(exc), 0) from None
        if not primes:
            raise err_for("primes")("need at least one prime", 0)
    seed = 0
    if "seed" in entries:
        seeds = _parse_ints(entries["seed"][0], err_for("seed"))
        if len(seeds) != 1:
            raise err_for("seed")("seed must be one integer", 0)
        seed = seeds[0]
    Q = _parse_ideal(entries["Q"][0], n, err_for("Q")) if "Q" in entries else MonomialIdeal.zero(n)
    J = _parse_ideal(entries["J"][0], n, err_for("J")) if "J" in entries else MonomialIdeal.maximal(n)

    chain_keys = sorted((k for k in entries if re.fullmatch(r"N\d+", k)), key=lambda k: int(k[1:]))
    for want, k in enumerate(chain_keys, start=1):
        if int(k[1:]) != want:
            raise CaseFileError(f"initial chain skips N{want}", path, entries[k][1], 1)
    initial: tuple[MonomialIdeal, ...] = ()
    if chain_keys:
        initial = (MonomialIdeal.unit(n),) + tuple(_parse_ideal(entries[k][0], n, err_for(k)) for k in chain_keys)
    if "r" in entries:
        rs = _parse_ints(entries["r"][0], err_for("r"))
        if len(rs) != 1 or rs[0] != len(chain_keys):
            raise err_for("r")(f"r = {entries['r'][0]} but the initial chain has {len(chain_keys)} steps", 0)

    try:
        spec = FiltrationSpec(RingSpec(n, primes[0]), Q, J, initial)
    except FiltrationError as exc:
        if exc.index is not None and exc.index >= 1 and f"N{exc.index}" in entries:
            raise CaseFileError(str(exc), path, entries[f"N{exc.index}"][1], 1) from None
        key = "J" if "J =" in str(exc) and "J" in entries else "Q"
        line = entries[key][1] if key in entries else 1
        raise CaseFileError(str(exc), path, line, 1) from None

    expected: dict[str, object] = {}
    for k, (v, _, _) in entries.items():
        if not k.startswith("expect."):
            continue
        name = k[7:]
        vals = _parse_ints(v, err_for(k))
        expected[name] = vals if name in ("e", "e_bar", "h0_chain") else (vals[0] if len(vals) == 1 else vals)
    label = entries["label"][0] if "label" in entries else (Path(path).stem if path else "")
    return CaseFile(spec, label, tuple(primes), seed, expected, path)


def parse_case_file(path: str | Path) -> CaseFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CaseFileError(f"cannot read case file: {exc.strerror}", str(path)) from None
    return parse_text(text, str(path))


def _ideal_text(q: MonomialIdeal) -> str:
    if q.is_zero:
        return "0"
    return " ".join("[" + ",".join(str(a) for a in g) + "]" for g in q.gens)


def emit(case: CaseFile) -> str:
    """Canonical text for ``case``; :func:`parse_text` inverts it."""
    spec = case.spec
    lines = []
    if case.label:
        lines.append(f"label = {case.label}")
    lines.append(f"n = {spec.ring.n}")
    lines.append("primes = " + ", ".join(str(p) for p in case.primes))
    lines.append(f"seed = {case.seed}")
    lines.append(f"Q = {_ideal_text(spec.Q)}")
    lines.append("J = m" if spec.J == MonomialIdeal.maximal(spec.ring.n) else f"J = {_ideal_text(spec.J)}")
    for k, nk in enumerate(spec.initial[1:], start=1):
        lines.append(f"N{k} = {_ideal_text(nk)}")
    if spec.initial:
        lines.append(f"r = {spec.r}")
    for name, val in sorted(case.expected.items()):
        text = ", ".join(str(v) for v in val) if isinstance(val, (list, tuple)) else str(val)
        lines.append(f"expect.{name} = {text}")
    return "\n".join(lines) + "\n"


def canonical_spec(case: CaseFile) -> dict:
    spec = case.spec
    return {
        "n": spec.ring.n,
        "Q": spec.Q.to_json(),
        "J": spec.J.to_json(),
        "initial": [nk.to_json() for nk in spec.initial],
    }
