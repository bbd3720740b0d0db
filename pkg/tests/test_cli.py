from __future__ import annotations

import json

import pytest

from reesdepth.cli import main
from reesdepth.report import stable_part


def run(tmp_path, *argv, name="r.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    doc = json.loads(out.read_text()) if out.exists() else None
    return code, doc


def outcomes(doc):
    return {c["name"]: c["outcome"] for c in doc["checks"]}


@pytest.mark.parametrize("d,degrees", [(5, [2, 3]), (6, [3, 3]), (2, [1, 1])])
def test_syzygy(tmp_path, d, degrees):
    code, doc = run(tmp_path, "syzygy", "--degree", str(d), "--seed", "3")
    assert code == 0
    check = doc["checks"][0]
    assert sorted(check["data"]["degrees"]) == degrees
    assert main(["--verify", str(tmp_path / "r.json")]) == 0


def test_syzygy_top_piece(tmp_path):
    _, doc = run(tmp_path, "syzygy", "--degree", "8")
    assert doc["checks"][1]["data"]["top_piece"] == {"10": 2, "11": 0}


def test_rank(tmp_path):
    code, doc = run(tmp_path, "rank", "--degree", "10")
    assert code == 0
    for c in doc["checks"]:
        assert c["data"]["achieved_rank"] == c["data"]["target_rank"] == 24
    assert main(["verify", str(tmp_path / "r.json")]) == 0


def test_rank_refuses_d6_with_pointer(tmp_path, capsys):
    code, doc = run(tmp_path, "rank", "--degree", "6")
    assert code == 2 and doc is None
    assert "depth --degree 6" in capsys.readouterr().err


def test_rank_exploratory_is_recorded(tmp_path):
    code, doc = run(tmp_path, "rank", "--degree", "6", "--exploratory")
    assert code == 0
    assert set(outcomes(doc).values()) == {"recorded"}


def test_rr(tmp_path):
    code, doc = run(tmp_path, "rr", "--degree", "7")
    assert code == 0
    got = outcomes(doc)
    assert got["rr[content_matrix]"] == got["rr[colon_oracle]"] == "pass"
    assert got["conjecture"] == "recorded"
    assert main(["--verify", str(tmp_path / "r.json")]) == 0


def test_rr_even(tmp_path):
    code, doc = run(tmp_path, "rr", "--degree", "12", "--method", "content")
    assert code == 0 and outcomes(doc) == {"rr[content_matrix]": "pass"}


def test_depth_d6(tmp_path):
    code, doc = run(tmp_path, "depth", "--degree", "6")
    assert code == 0
    ladder = next(c for c in doc["checks"] if c["name"] == "lambda_ladder")
    assert ladder["data"]["values"][:3] == [9, 3, 3]
    verdict = next(c for c in doc["checks"] if c["name"] == "verdict")
    assert verdict["data"]["verdict"] == "depth_one"


@pytest.mark.parametrize("name,values", [("a", [9, 2, 2, 1, 1]), ("b", [9, 3, 1, 1, 1])])
def test_depth_examples(tmp_path, name, values):
    code, doc = run(tmp_path, "depth", "--example", name)
    assert code == 0
    ladder = next(c for c in doc["checks"] if c["name"] == "lambda_ladder")
    assert ladder["data"]["values"] == values
    assert doc["config"]["field"] == "rational"
    assert main(["--verify", str(tmp_path / "r.json")]) == 0


def test_replay_determinism(tmp_path):
    _, a = run(tmp_path, "rr", "--degree", "5", "--seed", "11", name="a.json")
    _, b = run(tmp_path, "rr", "--degree", "5", "--seed", "11", name="b.json")
    assert stable_part(a) == stable_part(b)
    assert set(a["timestamp"]) == {"created", "total_seconds", "wall_times"}
    _, c = run(tmp_path, "rr", "--degree", "5", "--seed", "12", name="c.json")
    assert stable_part(a) != stable_part(c)


def test_verify_detects_tampering(tmp_path):
    run(tmp_path, "rr", "--degree", "5", "--method", "content")
    path = tmp_path / "r.json"
    doc = json.loads(path.read_text())
    target = doc["checks"][0]["data"]["targets"][0]
    key = next(iter(target["cofactors"]))
    target["cofactors"][key][0] += 1
    path.write_text(json.dumps(doc))
    assert main(["--verify", str(path)]) == 1


def test_input_forms(tmp_path):
    path = tmp_path / "in.json"
    # a Hilbert-Burch matrix with entries given as coefficient lists
    path.write_text(json.dumps({"hilbert_burch": [
        [[0, -1, 0, 0], [-1, 0, 0, 0]],
        [[0, 0, 0, 1], [0, 0, 0, 0]],
        [[1, 0, 0, 0], [0, 0, 0, 1]],
    ]}))
    code, doc = run(tmp_path, "syzygy", "--input", str(path))
    assert code == 0
    assert doc["checks"][0]["inputs"]["forms"][0] == [0, 0, 0, 0, 0, 0, 1]
    assert set(outcomes(doc).values()) == {"recorded"}
    path.write_text(json.dumps({"field": "gfp:101", "forms": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}))
    code, doc = run(tmp_path, "syzygy", "--input", str(path))
    assert code == 0 and doc["config"]["field"] == "gfp:101"


@pytest.mark.parametrize("argv", [
    ["rank", "--degree", "5", "--field", "gfp:100"],
    ["rr"],
    ["depth", "--degree", "4"],
    ["syzygy", "--input", "/nonexistent.json"],
    ["depth", "--example", "a", "--field", "gfp:101"],
    [],
])
def test_config_errors(tmp_path, argv):
    assert main(argv) == 2


def test_verify_bad_file(tmp_path):
    assert main(["--verify", str(tmp_path / "missing.json")]) == 2


def test_not_primary_input(tmp_path):
    path = tmp_path / "in.json"
    path.write_text(json.dumps({"forms": [[0, 1, 0], [0, 0, 1], [0, 1, 1]]}))
    assert main(["syzygy", "--input", str(path)]) == 2
