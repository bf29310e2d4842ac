from __future__ import annotations

import json
import logging
import multiprocessing as mp
import os

import pytest

from hilbertforge import __version__
from hilbertforge.cache import ENV_VAR, ResultCache, case_id, resolve_dir
from hilbertforge.casefile import parse_text
from hilbertforge.runner import run_case

TEXT = "label = demo\nn = 2\nQ = [2,0] [1,3]\n"


def test_case_id_ignores_label_but_not_engine_config():
    a = case_id({"n": 2}, (3, 5), 0)
    assert a == case_id({"n": 2}, [3, 5], 0)
    assert a != case_id({"n": 2}, (3, 5), 1)
    assert a != case_id({"n": 2}, (3, 7), 0)
    one = run_case(parse_text(TEXT))[0]["case_id"]
    two = run_case(parse_text(TEXT.replace("demo", "renamed")))[0]["case_id"]
    assert one == two


def test_resolve_dir(monkeypatch, tmp_path):
    monkeypatch.delenv(ENV_VAR, raising=False)
    assert str(resolve_dir()) == ".hilbertforge-cache"
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert resolve_dir() == tmp_path
    assert resolve_dir("elsewhere").name == "elsewhere"


def test_hit_after_store_and_identical_record(tmp_path):
    cache = ResultCache(tmp_path, __version__)
    fresh, run1 = run_case(parse_text(TEXT), cache)
    hit, run2 = run_case(parse_text(TEXT), cache)
    assert (run1["cached"], run2["cached"]) == (False, True)
    assert json.dumps(fresh, sort_keys=True) == json.dumps(hit, sort_keys=True)


def test_version_bump_is_a_miss(tmp_path):
    record, _ = run_case(parse_text(TEXT), ResultCache(tmp_path, __version__))
    assert ResultCache(tmp_path, __version__).lookup(record["case_id"], record["primes"], record["seed"])
    bumped = ResultCache(tmp_path, __version__ + ".post1")
    assert bumped.lookup(record["case_id"], record["primes"], record["seed"]) is None
    with pytest.raises(ValueError):
        bumped.store(record)


def test_corrupt_entry_evicted(tmp_path, caplog):
    cache = ResultCache(tmp_path, __version__)
    record, _ = run_case(parse_text(TEXT), cache)
    path = tmp_path / f"{record['case_id']}.json"
    path.write_text("{ not json")
    with caplog.at_level(logging.WARNING):
        assert cache.lookup(record["case_id"], record["primes"], record["seed"]) is None
    assert "corrupt" in caplog.text
    assert not path.exists()
    _, run = run_case(parse_text(TEXT), cache)
    assert run["cached"] is False and path.exists()


def test_foreign_record_not_trusted(tmp_path):
    cache = ResultCache(tmp_path, "1.0")
    (tmp_path / "abc.json").write_text(json.dumps({"case_id": "other", "tool_version": "1.0"}))
    assert cache.lookup("abc", (3,), 0) is None


def _writer(args):
    directory, tag = args
    cache = ResultCache(directory, "1.0")
    record = {"case_id": "race", "tool_version": "1.0", "primes": [3], "seed": 0, "payload": "x" * 200_000}
    for _ in range(20):
        cache.store(record)
    return tag


def test_concurrent_writers_leave_one_record(tmp_path):
    with mp.get_context("spawn").Pool(4) as pool:
        done = pool.map(_writer, [(str(tmp_path), k) for k in range(4)])
    assert sorted(done) == [0, 1, 2, 3]
    files = os.listdir(tmp_path)
    assert files == ["race.json"]
    assert json.loads((tmp_path / "race.json").read_text())["payload"] == "x" * 200_000
