import json

import pytest
from click.testing import CliRunner

from dp1.cli import SCHEMA, _jsonable, main
from dp1.examples import load_fixture

CFG28 = {"points": [[0, 1, 1], [0, 14, 13], [1, 0, 1], [21, 0, 13], [1, 1, 1], [6, 6, -1],
                    [-2, 2, 1], [-3, 3, -1]]}


def run(*args, env=None, code=0):
    r = CliRunner().invoke(main, list(args), env=env, catch_exceptions=False)
    assert r.exit_code == code, r.output
    doc = json.loads(r.output)
    assert doc["schema"] == SCHEMA
    return doc


@pytest.fixture
def cfg_file(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(CFG28))
    return str(p)


def test_big_integers_become_strings():
    from fractions import Fraction
    assert _jsonable({"a": 2 ** 60, "b": 7, "c": Fraction(1, 3), "d": [-(2 ** 53)]}) == {
        "a": str(2 ** 60), "b": 7, "c": "1/3", "d": [str(-(2 ** 53))]}


def test_classes():
    doc = run("classes")
    assert doc["command"] == "classes"
    assert len(doc["result"]["classes"]) == 240


def test_cliques_count_and_threads_env():
    a = run("cliques", "--size", "4", "--count-only")["result"]["count"]
    b = run("cliques", "--size", "4", "--count-only", env={"DP1_THREADS": "2"})["result"]["count"]
    c = run("--threads", "1", "cliques", "--size", "4", "--count-only")["result"]["count"]
    assert a == b == c > 0


def test_cliques_listing_and_checkpoint(tmp_path):
    ck = str(tmp_path / "ck")
    first = run("cliques", "--size", "3", "--checkpoint", ck)["result"]
    again = run("cliques", "--size", "3", "--checkpoint", ck, "--resume")["result"]
    assert first["cliques"] == again["cliques"] and first["count"] == len(first["cliques"])
    out = str(tmp_path / "c.npy")
    assert run("cliques", "--size", "3", "--out", out)["result"]["written"] == out


def test_orbits_small_with_plot(tmp_path):
    doc = run("orbits", "--size", "4", "--plot", str(tmp_path / "fig"))
    res = doc["result"]
    assert res["status"] == "complete"
    assert all(f.endswith(".png") for f in res["figures"])


def test_kernels_from_labels(tmp_path):
    rep = tmp_path / "rep.json"
    rep.write_text(json.dumps(["L:1,2", "L:3,4", "L:5,6", "L:7,8", "C:1,2", "C:3,4", "C:5,6",
                               "C:7,8"]))
    doc = run("kernels", "--rep", str(rep))
    assert len(doc["result"]["reports"]) == 1
    r = CliRunner().invoke(main, ["kernels"])
    assert r.exit_code == 2


def test_curves(cfg_file):
    doc = run("curves", "--config", cfg_file, "--label", "C:1,2", "--label", "Q:2,6,7",
              "--point", "0,0,1")
    res = doc["result"]
    assert res["general_position"]["general_position"]
    assert [c["through_point"] for c in res["curves"]] == [True, True]


def test_torsion(cfg_file):
    doc = run("torsion", "--config", cfg_file, "--point", "0,0,1", "--label", "L:1,2")
    assert doc["result"]["verdict"] == "non-torsion"


def test_generate():
    doc = run("generate", "--params", "-1/3,-1/6,1/2,-1")
    assert doc["result"]["six_curves_concurrent"]
    assert doc["result"]["params"]["a"] == "13/14"
    bad = run("generate", "--params", "2,3,5,1", code=2)
    assert "error" in bad["result"]


def test_search_budget():
    doc = run("search", "--height", "10", "--max-candidates", "1", "--budget", "30")
    assert doc["result"]["tried"] == 1


def test_verify_example_exit_codes(tmp_path):
    doc = run("verify-example", "ex7lines")
    assert doc["result"]["ok"]
    fx = json.loads(json.dumps(vars(load_fixture("ex7lines")), default=str))
    raw = {"schema": "dp1-example/1", "name": "tampered", "title": "",
           "points": [list(map(str, p)) for p in load_fixture("ex7lines").points],
           "query_point": ["0", "0", "1"], "curve_labels": fx["curve_labels"],
           "expected": {"general_position": True, "concurrent_curve_labels": fx["curve_labels"],
                        "base_point": ["1", "2", "3"], "torsion_verdict": "non-torsion"}}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(raw))
    doc = run("verify-example", str(p), code=1)
    stages = {s["stage"]: s["ok"] for s in doc["result"]["stages"]}
    assert stages["base_point"] is False and stages["torsion"] is True


def test_suite_properties():
    doc = run("suite", "properties")
    assert doc["result"]["passed"]
