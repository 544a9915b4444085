import json
import sqlite3

import pytest

from ellsurf.exact_algebra import QQ, cyclotomic8
from ellsurf.workbench import (CacheIntegrityError, PipelineError, SpecError, TraceCache, load_spec,
                               run_pipeline)
from ellsurf.workbench.cli import main
from ellsurf.workbench.pipeline import emit, recompute_trace
from ellsurf.workbench.specfile import fixture_names, parse_rf, spec_from_text


def test_fixture_names():
    assert set(fixture_names()) >= {"E1", "E1p", "E1pp", "E2", "E2p", "E3"}


def test_parse_rf():
    f = parse_rf("(t^2-1)^2/(5+t^2)", QQ)
    assert f.num.degree == 4 and f.den.degree == 2
    K = cyclotomic8()
    g = parse_rf("i*sqrt2*t", K)
    z = K.gen
    assert g.num.c[1] == z * z * (z - z ** 3)
    with pytest.raises(SpecError):
        parse_rf("i*t", QQ)
    with pytest.raises(SpecError):
        parse_rf("t + w", QQ)
    assert parse_rf("0", QQ).is_zero()


def test_spec_validation_errors():
    with pytest.raises(SpecError):
        spec_from_text("name: X\nfield: QQ\n")
    with pytest.raises(SpecError):
        load_spec("no-such-fixture")


def test_spec_digest_stable():
    assert load_spec("E2").digest == load_spec("E2").digest
    assert load_spec("E2").digest != load_spec("E3").digest


def test_reports_are_deterministic():
    a = run_pipeline(load_spec("E1"), "fibers")
    b = run_pipeline(load_spec("E1"), "fibers")
    assert emit(a, "json") == emit(b, "json")
    c = run_pipeline(load_spec("E1pp"), "count", primes=[11], depth=2)
    d = run_pipeline(load_spec("E1pp"), "count", primes=[11], depth=2, threads=3)
    assert c["result"] == d["result"]


def test_emit_formats():
    rep = run_pipeline(load_spec("E1"), "fibers")
    assert json.loads(emit(rep, "json"))["result"]["euler_number"] == 12
    assert emit(rep, "csv").splitlines()[0] == "place,type,group,degree,split"
    assert "result.euler_number: 12" in emit(rep, "text")


def test_charpoly_rejects_bad_prime():
    with pytest.raises(PipelineError) as err:
        run_pipeline(load_spec("E1pp"), "charpoly", primes=[5], depth=2)
    assert err.value.stage == "charpoly"


def test_count_flags_bad_reduction():
    rep = run_pipeline(load_spec("E1pp"), "count", primes=[5, 7], depth=1)
    assert [r["good_reduction"] for r in rep["result"]["rows"]] == [False, True]


def test_cli_json_and_errors(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["fibers", "E3", "--emit", "json", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["result"]["trivial_rank"] == 34
    assert main(["count"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["status"] == "error" and err["stage"] == "cli"


def test_cli_pythagorean_box(capsys):
    assert main(["pythagorean", "--box", "1:3", "--emit", "json"]) == 0
    res = json.loads(capsys.readouterr().out)["result"]
    assert len(res["rows"]) == 9


# -- cache ---------------------------------------------------------------------


def _count(cache, depth=2):
    return run_pipeline(load_spec("E1pp"), "count", primes=[11], depth=depth, cache=cache)["result"]["rows"][0]


def test_cache_stats_match_orbits(tmp_path):
    cache = TraceCache(tmp_path)
    row = _count(cache)
    assert cache.stats()["entries"] == row["orbits_processed"]
    assert row["cache_hits"] == 0
    again = _count(cache)
    assert again["counts"] == row["counts"]
    assert again["cache_hits"] == row["orbits_processed"]


def test_cache_audit_fresh_passes(tmp_path):
    cache = TraceCache(tmp_path)
    _count(cache, depth=1)
    res = cache.audit(recompute_trace, fraction=1.0)
    assert res["checked"] == cache.stats()["entries"] == res["passed"]
    assert not res["failed"]


def test_cache_default_audit_samples_one_percent(tmp_path):
    cache = TraceCache(tmp_path)
    _count(cache)
    res = cache.audit(recompute_trace)
    assert res["checked"] == round(cache.stats()["entries"] / 100) == res["passed"]


def test_cache_clear_then_recompute(tmp_path):
    cache = TraceCache(tmp_path)
    first = _count(cache)
    cache.clear()
    assert cache.stats()["entries"] == 0
    second = _count(cache)
    assert second["counts"] == first["counts"] and second["cache_hits"] == 0


def test_cache_tamper_quarantines(tmp_path):
    cache = TraceCache(tmp_path)
    _count(cache)
    cache.close()
    db = sqlite3.connect(tmp_path / TraceCache.FILENAME)
    db.execute("UPDATE traces SET value = CAST(CAST(value AS INTEGER) + 1 AS TEXT) WHERE rowid = 1")
    db.commit()
    db.close()
    cache = TraceCache(tmp_path)
    with pytest.raises(CacheIntegrityError):
        _count(cache)
    assert list(tmp_path.glob("traces.quarantine-*.sqlite"))
    assert cache.stats()["entries"] == 0


def test_cache_audit_catches_wrong_value_with_valid_checksum(tmp_path):
    from ellsurf.workbench.cache import _checksum
    cache = TraceCache(tmp_path)
    _count(cache, depth=1)
    m, p, d, pres, rep, value, _ = cache.entries()[0]
    bad = str(int(value) + 2)
    cache.db.execute("UPDATE traces SET value=?, checksum=? WHERE model=? AND p=? AND d=? AND rep=?",
                     (bad, _checksum((m, p, d, pres, rep), bad), m, p, d, rep))
    cache.db.commit()
    res = cache.audit(recompute_trace, fraction=1.0)
    assert res["failed"]
    assert list(tmp_path.glob("traces.quarantine-*.sqlite"))


def test_cli_cache_actions(tmp_path, capsys):
    d = str(tmp_path)
    assert main(["count", "E1pp", "--prime", "11", "--depth", "1", "--cache-dir", d]) == 0
    capsys.readouterr()
    assert main(["cache", "audit", "--cache-dir", d, "--emit", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["status"] == "pass"
    assert main(["cache", "clear", "--cache-dir", d]) == 0
    capsys.readouterr()
    assert main(["cache", "stats", "--cache-dir", d, "--emit", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["entries"] == 0


def test_json_counts_are_decimal_strings():
    rep = run_pipeline(load_spec("E1pp"), "count", primes=[11], depth=1)
    row = json.loads(emit(rep, "json"))["result"]["rows"][0]
    assert row["counts"] == [str(c) for c in rep["result"]["rows"][0]["counts"]]
    assert isinstance(row["orbits_processed"], int)
