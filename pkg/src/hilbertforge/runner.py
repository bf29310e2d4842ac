"""Turning case files into self-contained report records, with caching."""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .cache import ResultCache, case_id
from .casefile import CaseFile, canonical_spec, parse_case_file
from .errors import HilbertForgeError
from .verifier import Check, Verdict, analyze_case, verify_report

STATUSES = ("pass", "fail", "inapplicable", "uncertified")


def expectation_checks(case: CaseFile, report: dict) -> list[Check]:
    out = []
    for name, want in sorted(case.expected.items()):
        got = report.get(name)
        ok = got == want
        out.append(Check(f"expect.{name}", "pass" if ok else "fail", lhs=str(got), rhs=str(want), relation="=="))
    return out


def build_record(case: CaseFile) -> dict:
    """Analyze and verify one case.  The result has no timing data and is deterministic."""
    rep = analyze_case(case.spec, case.primes, case.seed)
    ledger, verdict = verify_report(rep)
    report = rep.to_json()
    verdict = Verdict(verdict.checks + expectation_checks(case, report))
    counts = Counter(c.status for c in verdict.checks)
    return {
        "case_id": case_id(canonical_spec(case), case.primes, case.seed),
        "label": case.label,
        "tool_version": __version__,
        "primes": list(case.primes),
        "seed": case.seed,
        "spec": canonical_spec(case),
        "report": report,
        "ledger": ledger.to_json(),
        "verdicts": verdict.to_json(),
        "summary": {s: counts.get(s, 0) for s in STATUSES},
        "ok": verdict.ok,
    }


def run_case(case: CaseFile, cache: ResultCache | None = None) -> tuple[dict, dict]:
    """Return ``(record, run)`` where ``run`` holds cache and timing metadata."""
    start = time.perf_counter()
    cid = case_id(canonical_spec(case), case.primes, case.seed)
    record = cache.lookup(cid, case.primes, case.seed) if cache else None
    cached = record is not None
    if record is None:
        record = build_record(case)
        if cache:
            cache.store(record)
    else:
        # labels are not part of the id; a renamed file keeps its entry
        record = dict(record, label=case.label)
        if case.expected:
            checks = [Check(**c) for c in record["verdicts"] if not c["name"].startswith("expect.")]
            checks += expectation_checks(case, record["report"])
            verdict = Verdict(checks)
            counts = Counter(c.status for c in checks)
            record.update(verdicts=verdict.to_json(), ok=verdict.ok,
                          summary={s: counts.get(s, 0) for s in STATUSES})
    run = {"cached": cached, "timings": {"total_s": round(time.perf_counter() - start, 6)}}
    return record, run


def _verify_one(path: str, cache_dir: str | None) -> dict:
    """Worker entry point: one line of the JSON-lines output."""
    try:
        case = parse_case_file(path)
        cache = ResultCache(cache_dir, __version__) if cache_dir else None
        record, _ = run_case(case, cache)
        return {"path": path, "record": record}
    except HilbertForgeError as exc:
        return {"path": path, "error": {"type": type(exc).__name__, "message": str(exc)}}


def verify_directory(directory: str | Path, jobs: int = 1, cache_dir: str | None = None) -> list[dict]:
    """Run every ``*.case`` file under ``directory``; results sorted by case id then path.

    Results never depend on ``jobs``: each case is seeded from its own file.
    """
    paths = sorted(str(p) for p in Path(directory).rglob("*.case"))
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_verify_one, paths, [cache_dir] * len(paths)))
    else:
        results = [_verify_one(p, cache_dir) for p in paths]
    return sorted(results, key=lambda r: (r.get("record", {}).get("case_id", ""), r["path"]))
