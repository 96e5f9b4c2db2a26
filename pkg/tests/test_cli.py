import json

import pytest

from zerosum.cli import main

FIELDS_INV = ["spec", "order", "invariant", "value", "certificate", "method", "nodes", "elapsed_ms", "budget_exhausted"]
FIELDS_CLAIM = ["spec", "order", "claim", "status", "certificate", "method", "nodes", "elapsed_ms", "budget_exhausted"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines() if line.strip()]


def test_invariant_dsd3(capsys):
    code, recs = run(capsys, "invariant", "dsd(3)", "--which", "do")
    assert code == 0 and len(recs) == 1
    r = recs[0]
    assert list(r) == FIELDS_INV
    assert r["value"] == 4 and r["certificate"]["witness_length"] == 3


def test_verify_t14(capsys):
    code, recs = run(capsys, "verify", "T1.4", "G2(2,2,1)")
    assert code == 0 and list(recs[0]) == FIELDS_CLAIM
    q = recs[0]["certificate"]["quantities"]
    assert q["Do(G)"] == q["L jennings"] == 7


def test_undetermined_exit(capsys):
    code, recs = run(capsys, "invariant", "G3(3,2,2,1)", "--which", "do", "--budget-nodes", "1000")
    assert code == 2
    r = recs[0]
    assert r["value"] == "undetermined" and r["budget_exhausted"]
    assert r["certificate"]["witness_length"] == 12


@pytest.mark.parametrize(
    "argv",
    [
        ["invariant", "G2(1,1,1)"],
        ["invariant", "dsd(3"],
        ["invariant", "dsd(3)", "--which", "zz"],
        ["nonsense"],
        ["invariant", "dsd(3)", "--budget-nodes", "0"],
        ["invariant", "dsd(3)", "--which", "loewy-direct"],
        ["verify", "T7", "dsd(3)"],
    ],
)
def test_invalid_input_exit(capsys, argv):
    assert main(argv) == 3


def test_group_info(capsys):
    code, recs = run(capsys, "group", "info", "G4(1)")
    assert code == 0
    prof = recs[0]["certificate"]["profile"]
    assert prof["center_size"] == 2 and prof["min_generators"] == 2


def test_byte_determinism(capsys):
    main(["invariant", "dsd(2,4)", "--which", "d,do,loewy-jennings,loewy-direct", "--no-timing"])
    a = capsys.readouterr().out
    main(["invariant", "dsd(2,4)", "--which", "d,do,loewy-jennings,loewy-direct", "--no-timing"])
    b = capsys.readouterr().out
    assert a == b and a


def test_cache_replay_and_rejection(capsys, tmp_path):
    cache = str(tmp_path / "c.json")
    argv = ["invariant", "dsd(5)", "--which", "d,do", "--no-timing", "--cache", cache, "--no-caps"]
    code, first = run(capsys, *argv)
    code2, second = run(capsys, *argv)
    assert code == code2 == 0
    assert [r["value"] for r in first] == [r["value"] for r in second]
    assert [r["certificate"] for r in first] == [r["certificate"] for r in second]
    assert "cache" in second[0]["method"]
    data = json.loads(open(cache).read())
    key = next(k for k in data if "|Do" in k)
    data[key]["value"] = 9
    open(cache, "w").write(json.dumps(data))
    code3, third = run(capsys, *argv)
    assert code3 == 1
    assert third[1]["certificate"]["kind"] == "cache-rejected"


def test_cache_env(capsys, tmp_path, monkeypatch):
    cache = tmp_path / "env.json"
    monkeypatch.setenv("ZEROSUM_CACHE", str(cache))
    run(capsys, "invariant", "cyclic(4)", "--which", "d")
    assert cache.exists()


def test_output_file(capsys, tmp_path):
    out = tmp_path / "o.jsonl"
    assert main(["invariant", "cyclic(3)", "--which", "d", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["value"] == 2


def test_catalog_list(capsys):
    code, recs = run(capsys, "catalog", "--max-order", "8")
    assert code == 0
    assert [r["spec"] for r in recs][:4] == ["cyclic(2)", "cyclic(3)", "cyclic(4)", "abelian(2,2)"]


def test_catalog_full_small(capsys):
    code, recs = run(capsys, "catalog", "--max-order", "16", "--suite", "full", "--no-caps")
    assert code == 0
    assert not [r for r in recs if r["status"] == "fail"]


def test_props(capsys):
    code, recs = run(capsys, "props", "--seed", "3", "--trials", "20")
    assert code == 0
    assert {r["claim"] for r in recs} == {"oracles", "lemma2.10", "lemma2.11", "lemma2.12"}
    assert all(r["status"] == "pass" for r in recs)
