"""Command line interface.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 a resource
ceiling was hit.

``verify`` writes JSON lines, one object per case, sorted by case id::

    {"path": "...", "record": {<report record>}}      # analyzed case
    {"path": "...", "error": {"type": ..., "message": ...}}   # rejected case

A report record has the keys ``case_id``, ``label``, ``tool_version``,
``primes``, ``seed``, ``spec``, ``report``, ``ledger``, ``verdicts``,
``summary`` and ``ok``; the full JSON schema ships as
``hilbertforge/schema/report.schema.json``.  ``analyze --json`` wraps one
record as ``{"record": ..., "run": {"cached": bool, "timings": {...}}}``;
only ``run`` varies between otherwise identical invocations.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import sys
from pathlib import Path

from . import __version__
from . import bounds as bd
from .cache import ResultCache, canonical_json, resolve_dir
from .casefile import CaseFile, emit, parse_case_file
from .errors import (
    HilbertForgeError,
    MalformedInputError,
    ResourceCeilingError,
    UnitIdealError,
    UnsupportedCaseError,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3
_INPUT_ERRORS = (MalformedInputError, UnsupportedCaseError, UnitIdealError)
_INPUT_ERROR_NAMES = {"MalformedInputError", "CaseFileError", "FiltrationError", "UnsupportedCaseError",
                      "UnitIdealError", "ExponentCapError", "DimensionPositiveError"}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ResourceCeilingError):
        return EXIT_RESOURCE
    if isinstance(exc, _INPUT_ERRORS):
        return EXIT_INPUT
    return EXIT_FAIL


def _render(value: str | None) -> str:
    if value is None:
        return ""
    try:
        return bd.describe(int(value))
    except ValueError:
        return value


def human_table(record: dict) -> str:
    rep = record["report"]
    lines = [f"case {record['label'] or record['case_id']}  (id {record['case_id']})"]
    fields = ["n", "regime", "d", "t", "pd", "r", "h0", "reg", "reg1", "reg_sat", "B", "postulation", "e", "e_bar"]
    width = max(map(len, fields))
    for k in fields:
        v = rep.get(k)
        if v is not None:
            lines.append(f"  {k:<{width}}  {tuple(v) if isinstance(v, list) else v}")
    for flag in rep.get("flags", []):
        lines.append(f"  note: {flag}")
    lines.append("")
    name_w = max(len(c["name"]) for c in record["verdicts"])
    lines.append(f"  {'check':<{name_w}}  {'status':<12} {'lhs':>24} rel {'rhs':<34} margin")
    for c in record["verdicts"]:
        if c["status"] == "inapplicable":
            lines.append(f"  {c['name']:<{name_w}}  {c['status']:<12} {c.get('reason', '')}")
            continue
        margin = "" if c.get("margin") is None else str(c["margin"])
        lines.append(
            f"  {c['name']:<{name_w}}  {c['status']:<12} {_render(c.get('lhs')):>24} "
            f"{c.get('relation', ''):>3} {_render(c.get('rhs')):<34} {margin}"
        )
    s = record["summary"]
    lines.append("")
    lines.append(f"  {s['pass']} pass, {s['fail']} fail, {s['uncertified']} uncertified, "
                 f"{s['inapplicable']} inapplicable")
    return "\n".join(lines)


# --- subcommands ---------------------------------------------------------------

def cmd_analyze(args) -> int:
    from .runner import run_case

    case = parse_case_file(args.case)
    cache = None if args.no_cache else ResultCache(resolve_dir(args.cache_dir), __version__)
    record, run = run_case(case, cache)
    print(human_table(record))
    out = Path(args.json) if args.json else Path(f"{Path(args.case).stem}.report.json")
    out.write_text(json.dumps({"record": record, "run": run}, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    print(f"\nreport written to {out}" + ("  (cached)" if run["cached"] else ""))
    return EXIT_OK if record["ok"] else EXIT_FAIL


def cmd_verify(args) -> int:
    from .runner import verify_directory

    if not Path(args.directory).is_dir():
        raise MalformedInputError(f"{args.directory} is not a directory")
    cache_dir = None if args.no_cache else str(resolve_dir(args.cache_dir))
    results = verify_directory(args.directory, jobs=args.jobs, cache_dir=cache_dir)
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for r in results:
            sink.write(canonical_json(r) + "\n")
    finally:
        if args.out:
            sink.close()
    errors = [r for r in results if "error" in r]
    failed = [r for r in results if "record" in r and not r["record"]["ok"]]
    print(f"{len(results)} cases: {len(results) - len(errors) - len(failed)} ok, "
          f"{len(failed)} failed, {len(errors)} errors", file=sys.stderr)
    for r in failed:
        names = [c["name"] for c in r["record"]["verdicts"] if c["status"] == "fail"]
        print(f"  FAIL {r['path']}: {', '.join(names)}", file=sys.stderr)
    for r in errors:
        print(f"  ERROR {r['path']}: {r['error']['type']}: {r['error']['message']}", file=sys.stderr)
    if any(r["error"]["type"] in _INPUT_ERROR_NAMES for r in errors):
        return EXIT_INPUT
    if any(r["error"]["type"] == "ResourceCeilingError" for r in errors):
        return EXIT_RESOURCE
    return EXIT_FAIL if failed or errors else EXIT_OK


def bound_rows(d: int, t: int, r: int, xi: int, delta_prime: int = 0) -> list[tuple[str, int | None]]:
    """Every ledger formula that depends only on (d, t, r, xi), with xi used for each xi_s and e_0."""
    rows: list[tuple[str, int | None]] = []

    def add(name, fn):
        try:
            rows.append((name, fn()))
        except ResourceCeilingError:
            rows.append((name, None))

    add("reg1_explicit_bound", lambda: bd.reg1_bound_explicit(xi, delta_prime, d))
    add("reg_bound_coefficients", lambda: bd.reg_bound_from_coefficients(xi, r, d))
    add("reg_bound_depth", lambda: bd.reg_bound_from_depth(xi, r, d, t))
    add("e1_bound_multiplicity", lambda: bd.coeff_bound_from_xi(xi, r, 1))
    for i in range(2, d + 1):
        add(f"coeff_bound_binomial[{i}]", lambda i=i: bd.coeff_bound_from_xi(xi, r, i)[0])
        add(f"coeff_bound_power[{i}]", lambda i=i: bd.coeff_bound_from_xi(xi, r, i)[1])
    for j in range(d - t + 1, d + 1) if t >= 1 else ():
        add(f"top_coeff_bound_depth[{j}]", lambda j=j: bd.top_coeff_bounds(xi, r, d, t, j, e0=xi).general)
        if r == 0:
            add(f"top_coeff_bound_adic[{j}]", lambda j=j: bd.top_coeff_bounds(xi, r, d, t, j).adic)
        if t == d:
            add(f"top_coeff_bound_cm[{j}]", lambda j=j: bd.top_coeff_bounds(xi, r, d, t, j, e0=xi).cm)
    return rows


def cmd_bounds(args) -> int:
    grid = list(itertools.product(args.d, args.t, args.r, args.xi))
    for d, t, r, xi in grid:
        if not 0 <= t <= d or d < 1 or r < 0 or xi < 1:
            raise MalformedInputError(f"invalid point d={d} t={t} r={r} xi={xi}: need 0 <= t <= d, r >= 0, xi >= 1")
        if d > bd.MAX_DIMENSION:
            raise ResourceCeilingError(f"d = {d} above the configured ceiling {bd.MAX_DIMENSION}")
    tabular = args.table or len(grid) > 1
    if tabular:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["d", "t", "r", "xi", "bound", "value"])
    ceiling = False
    for d, t, r, xi in grid:
        rows = bound_rows(d, t, r, xi, args.delta_prime)
        ceiling |= any(v is None for _, v in rows)
        if tabular:
            for name, v in rows:
                w.writerow([d, t, r, xi, name, "ceiling" if v is None else v])
        else:
            print(f"d={d} t={t} r={r} xi={xi}")
            for name, v in rows:
                print(f"  {name:<26} {'above resource ceiling' if v is None else bd.describe(v)}")
    return EXIT_RESOURCE if ceiling else EXIT_OK


def cmd_fuzz(args) -> int:
    from .verifier import FuzzParams, fuzz

    params = FuzzParams(n_max=args.n_max, deg_max=args.deg_max, gen_max=args.gen_max,
                        count=args.count, seed=args.seed, filtrations=args.filtrations)
    res = fuzz(params)
    extra_failed = [c for c in res.extra_checks if c.status == "fail"]
    print(f"{params.count} draws: {len(res.reports)} analyzed, {len(res.skipped)} skipped, "
          f"{len(res.errors)} errors, {len(res.failures)} failures")
    for c in res.extra_checks:
        print(f"  {c.name}: {c.status} ({c.reason})")
    for idx, msg in res.errors:
        print(f"  error in draw {idx}: {msg}")
    for k, fail in enumerate(res.failures):
        print(f"  FAIL {', '.join(fail.failed)}  shrunk to Q = {fail.case.Q}" + (f"  ({fail.error})" if fail.error else ""))
        if args.out_dir:
            out = Path(args.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"failure_{k}.case").write_text(emit(CaseFile(fail.case, label=f"fuzz failure {k}")))
    if res.failures or extra_failed:
        return EXIT_FAIL
    if any("ResourceCeilingError" in m for _, m in res.errors):
        return EXIT_RESOURCE
    return EXIT_FAIL if res.errors else EXIT_OK


def cmd_examples(args) -> int:
    from .families import run_embedded_flat, run_embedded_line

    results = [run_embedded_line(s) for s in range(1, 11)]
    results += [run_embedded_flat(d, s) for d in range(1, 4) for s in range(1, 5)]
    for res in results:
        print(f"{'PASS' if res.passed else 'FAIL'}  {res.name:<24} {res.summary}")
        for m in res.mismatches:
            print(f"      {m}")
    bad = sum(not r.passed for r in results)
    print(f"{len(results) - bad}/{len(results)} reference cases pass")
    return EXIT_FAIL if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hilbertforge", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def cache_opts(p):
        p.add_argument("--cache-dir", help="cache directory (default $HILBERTFORGE_CACHE or .hilbertforge-cache/)")
        p.add_argument("--no-cache", action="store_true")

    p = sub.add_parser("analyze", help="analyze and verify one case file")
    p.add_argument("case")
    p.add_argument("--json", help="where to write the JSON report (default <case>.report.json)")
    cache_opts(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="verify every *.case file under a directory")
    p.add_argument("directory")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="JSON-lines output file (default stdout)")
    cache_opts(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="tabulate bound formulas over a parameter grid")
    for name in ("d", "t", "r", "xi"):
        p.add_argument(f"--{name}", type=int, nargs="+", required=name != "r", default=[0] if name == "r" else None)
    p.add_argument("--delta-prime", type=int, default=0)
    p.add_argument("--table", action="store_true", help="CSV even for a single point")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("fuzz", help="verify random monomial cases")
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--deg-max", type=int, default=6)
    p.add_argument("--gen-max", type=int, default=4)
    p.add_argument("--filtrations", action="store_true", help="also draw non-maximal J and non-adic chains")
    p.add_argument("--out-dir", help="write shrunk failing cases here as case files")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("paper-examples", help="run the built-in reference families")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except HilbertForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


run_subcommand = main

if __name__ == "__main__":
    sys.exit(main())
