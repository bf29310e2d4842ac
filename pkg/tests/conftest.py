from __future__ import annotations

import json
import random
from importlib import resources
from pathlib import Path

import pytest

from hilbertforge.monomial import MonomialIdeal

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"


def random_ideal(rng: random.Random, n: int, gen_max: int = 4, deg_max: int = 6) -> MonomialIdeal:
    gens = []
    for _ in range(rng.randint(1, gen_max)):
        u = [0] * n
        for _ in range(rng.randint(1, deg_max)):
            u[rng.randrange(n)] += 1
        gens.append(tuple(u))
    return MonomialIdeal.of(n, gens)


@pytest.fixture(scope="session")
def corpus_paths() -> list[Path]:
    return sorted(CORPUS.glob("*.case"))


@pytest.fixture(scope="session")
def report_schema() -> dict:
    text = resources.files("hilbertforge").joinpath("schema/report.schema.json").read_text()
    return json.loads(text)


# --- acceptance summary ----------------------------------------------------------

# criterion number -> list of (passed, detail); filled in by test_acceptance.py
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}
ACCEPTANCE_TITLES = {
    1: "embedded-line family s=1..10: reg, e, h0, B, depth, dim exact; < 1 s per case",
    2: "flat family d<=3, s<=4: e = (1, 0, .., (-1)^d s); coefficient regularity bound passes",
    3: "identities: h0 from top coefficient, polynomial beyond reg, Auslander-Buchsbaum on every corpus case",
    4: "inequalities: zero failures on curated corpus + 500 fuzz cases (seed 42) in < 2 min",
    5: "tightness: saturation regularity bound margin exactly 0 on the embedded-line family",
    6: "enumerated Hilbert function == series expansion, 200 random ideals, degrees <= 12",
    7: "depth regularity bound at (d,t,xi,r) = (5,1,3,0) equals 4^1200 - 2 (723 digits) in < 10 ms",
    8: "determinism and cache: byte-identical JSON across runs and cache hits",
}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for k in sorted(ACCEPTANCE_TITLES):
        parts = ACCEPTANCE.get(k)
        if not parts:
            status, detail = "NOT RUN", ""
        else:
            status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
            detail = "; ".join(d for _, d in parts if d)
        line = f"criterion {k}: {status}  {ACCEPTANCE_TITLES[k]}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
