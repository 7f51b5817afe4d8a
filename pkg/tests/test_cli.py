import io
import json
import subprocess
import sys

import pytest

from toricdiag import cli
from toricdiag import constructions as cons
from toricdiag.polytope import Polytope


def run(argv, stdin_text=None):
    res = cli.run(argv, io.StringIO(stdin_text) if stdin_text is not None else None)
    return res


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_family_then_ehrhart_via_stdin():
    fam = run(["family", "--kind", "cross", "--n", "3"])
    assert fam.exit_code == 0
    res = run(["ehrhart", "-"], json.dumps(fam.payload))
    assert res.payload["hstar"] == ["1", "3", "3", "1"]
    assert res.payload["values"]["2"] == "25"
    assert res.payload["betti"]["cb"]["6"] == "8"


def test_envelope_is_accepted_as_input():
    fam = run(["family", "--kind", "smallcross", "--n", "3"])
    env = fam.to_json()
    assert env["status"] == "ok" and "elapsed_ms" in env
    res = run(["hstar", "-"], json.dumps(env))
    assert res.payload == {"hstar": ["1", "2", "1", "0"]}


def test_counts():
    assert run(["enumerate-cacti", "--n", "10", "--count-only"]).payload["count"] == "12099"
    assert run(["enumerate-cacti", "--n", "15", "--count-only"]).payload["count"] == "6002600"
    assert run(["enumerate-cacti", "--n", "6", "--count-only", "--method", "enumerate"]).payload["count"] == "111"


def test_enumerate_realize_extract_roundtrip(tmp_path):
    res = run(["enumerate-cacti", "--n", "3", "--realize"])
    items = res.payload["cacti"]
    assert len(items) == 5
    for item in items:
        D = run(["realize", write(tmp_path, "c.json", item["cactus"])]).payload
        assert D == item["diagram"]
        back = run(["extract", write(tmp_path, "d.json", D)]).payload
        assert back["code"] == item["code"]


def test_preq_and_equiv(tmp_path):
    cube = run(["family", "--kind", "cube", "--n", "3", "--lo", "0", "--hi", "1"]).payload
    pre = run(["preq", write(tmp_path, "cube.json", cube)])
    assert pre.payload["index"] == 2
    small = run(["family", "--kind", "smallcross", "--n", "3"]).payload
    res = run(["equiv", write(tmp_path, "pre.json", pre.payload), write(tmp_path, "s.json", small)])
    assert res.payload["verdict"] == "equivalent"
    hs = {"halfspaces": [{"normal": [1, 0], "offset": 1}, {"normal": [0, 1], "offset": 1},
                         {"normal": [-1, 0], "offset": 1}, {"normal": [0, -1], "offset": 1}]}
    res = run(["preq", "-"], json.dumps(hs))
    assert Polytope.from_json(res.payload["diagram"]) == cons.prequantize(cons.cube(2)).diagram


def test_identify(tmp_path):
    D = run(["family", "--kind", "Dk", "--n", "4", "--k", "2"]).payload
    res = run(["identify", write(tmp_path, "d.json", D)])
    assert res.payload["family"] == "D_k" and res.payload["k"] == 2
    S = run(["family", "--kind", "smallcross", "--n", "3"]).payload
    assert run(["identify", write(tmp_path, "s.json", S)]).payload["family"] == "small_cross"
    C = run(["family", "--kind", "cross", "--n", "3"]).payload
    out = run(["identify", write(tmp_path, "c.json", C)]).payload
    assert out["family"] == "none" and out["small_cross_failed_step"] == "hstar"


def test_dual_betti_roots(tmp_path):
    C = run(["family", "--kind", "cube", "--n", "2"]).payload
    path = write(tmp_path, "cube.json", C)
    assert Polytope.from_json(run(["dual", path]).payload) == cons.cross_polytope(2)
    X = write(tmp_path, "x.json", run(["family", "--kind", "cross", "--n", "3"]).payload)
    b = run(["betti", X, "--quotient", "2"]).payload
    assert b["quotient"]["cb"]["0"] == "0" and b["quotient"]["cb"]["2"] == "1"
    r = run(["roots", X, "--target", "-0.5"]).payload
    assert r["verdict"] is True
    r = run(["roots", "--hstar", "1,2,1,0", "--target", "-1"]).payload
    assert r["verdict"] is True


def test_bott_family(tmp_path):
    L = write(tmp_path, "L.json", [[-1, 0, 0], [1, -1, 0], [0, 0, -1]])
    D = run(["family", "--kind", "bott", "--bott-matrix", L]).payload
    assert len(D["vertices"]) == 6
    M = run(["family", "--kind", "bott", "--bott-matrix", L, "--moment"]).payload
    assert len(M["vertices"]) == 8


def test_deterministic_output():
    a = run(["enumerate-cacti", "--n", "4", "--realize"]).payload
    b = run(["enumerate-cacti", "--n", "4", "--realize"]).payload
    assert json.dumps(a) == json.dumps(b)


@pytest.mark.parametrize("argv,stdin,code,kind", [
    (["hstar", "-"], "{bad", 2, "parse"),
    (["hstar", "-"], '{"dim": 2}', 2, "parse"),
    (["hstar", "/no/such/file"], None, 2, "usage"),
    (["bogus"], None, 2, "usage"),
    (["family", "--kind", "Tk", "--n", "3"], None, 2, "usage"),
    (["family", "--kind", "Dk", "--n", "3", "--k", "0"], None, 3, "parameter"),
    (["hstar", "-"], '{"vertices": [[0, 0], [1, 1], [2, 2]]}', 3, "degenerate"),
    (["preq", "-"], '{"vertices": [[1,0,0],[-1,0,0],[0,1,0],[0,-1,0],[0,0,1],[0,0,-1]]}', 3, "precondition"),
    (["extract", "-"], '{"vertices": [[0, 0], [2, 0], [0, 2]]}', 3, "domain"),
    (["identify", "-"], '{"vertices": [[0, 0], [1, 0], [0, 1]]}', 0, None),
    (["--threads", "0", "hstar", "-"], '{"vertices": [[0, 0], [1, 0], [0, 1]]}', 2, "usage"),
    (["verify", "--suite", "nope"], None, 2, "usage"),
    (["roots"], None, 2, "usage"),
])
def test_error_codes(argv, stdin, code, kind):
    res = run(argv, stdin)
    assert res.exit_code == code
    if kind:
        assert res.payload["error"]["code"] == kind


def test_verify_single_suite():
    res = run(["verify", "--suite", "bott"])
    assert res.exit_code == 0 and res.payload["passed"]


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "toricdiag", "family", "--kind", "simplex", "--n", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["dim"] == 2
    out = subprocess.run([sys.executable, "-m", "toricdiag", "hstar", "/no/such"], capture_output=True, text=True)
    assert out.returncode == 2 and "cannot read" in out.stderr
    out = subprocess.run([sys.executable, "-m", "toricdiag", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "enumerate-cacti" in out.stdout
