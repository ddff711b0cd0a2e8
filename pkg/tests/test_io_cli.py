import io
import json

import pytest

from koszul import cli
from koszul.constructors import datum_from_split, split_rational
from koszul.io import (
    FormatError,
    class_from_json,
    class_to_json,
    datum_from_json,
    datum_to_json,
    load_json,
    model_from_json,
    model_to_json,
)
from koszul.models import CurveModel, mult_table
from koszul.multilinear import KoszulClass


def run(*argv):
    buf = io.StringIO()
    code = cli.run(list(argv), out=buf)
    return code, (json.loads(buf.getvalue()) if code == 0 and "text" not in argv else buf.getvalue())


def test_model_round_trip(data):
    for name in ("rational4.json", "elms-quadric.json", "genus4-canonical.json"):
        obj = load_json(data(name))
        m = model_from_json(obj)
        again = model_from_json(model_to_json(m))
        assert mult_table(again).products == mult_table(m).products


def test_full_matrix_i2_accepted():
    obj = {"kind": "quadric_presented", "n_vars": 2, "I2": [[["0", "1/2"], ["1/2", "0"]]]}
    assert mult_table(model_from_json(obj)).dim2 == 2


@pytest.mark.parametrize("obj", [
    {"kind": "cubic"},
    {"kind": "rational"},
    {"kind": "quadric_presented", "n_vars": 3, "I2": [["1/1"]]},
    {"kind": "quadric_presented", "n_vars": 2, "I2": [["x", "0", "0"]]},
])
def test_bad_models(obj):
    with pytest.raises(FormatError):
        model_from_json(obj)


def test_class_round_trip():
    c = KoszulClass(2, 4, {((0, 1), 2): "1/3", ((1, 3), 0): -2})
    assert class_from_json(json.loads(json.dumps(class_to_json(c))), 4) == c
    with pytest.raises(FormatError):
        class_from_json(class_to_json(c), 5)


def test_datum_round_trip():
    D = datum_from_split(split_rational(1, 2))
    m = CurveModel.rational(3)
    back = datum_from_json(datum_to_json(D), m, D.mult)
    assert back.d == D.d


def test_cli_dims():
    code, out = run("dims", "--model", "rational3.json", "--p", "1")
    assert code == 0 and out["dim"] == 3
    assert len(out["model_sha256"]) == 64 and out["params"] == {"model": "rational3.json", "p": 1}


def test_cli_build_gl():
    code, out = run("build-gl", "--model", "rational2.json", "--d1", "1", "--d2", "1")
    assert code == 0 and out["nonzero"] is True


def test_cli_class_rank():
    code, out = run("class-rank", "--model", "elms-quadric.json", "--class", "q.json")
    assert code == 0 and (out["rank"], out["exact"]) == (3, True)


def test_cli_other_commands():
    assert run("check-ks", "--model", "elms-quadric.json", "--class", "q.json")[1]["ks_identity"]
    assert run("check-four-term", "--model", "rational2.json", "--datum", "broken-datum.json")[1]["holds"] is False
    assert run("gen-zero", "--model", "rational3.json", "--datum", "split-datum-2-1.json")[1]["found"]
    assert run("mu-coker", "--model", "genus4-canonical.json")[1]["agree"]
    assert run("plucker", "--model", "elms-quadric.json", "--class", "q.json")[1]["on_grassmannian"]
    assert run("pfaffian", "--model", "elms-quadric.json", "--class", "q.json")[1]["all_vanish"]
    out = run("split-detect", "--model", "rational2.json", "--datum", "conic-datum.json",
              "--t", "[1,0,0,1]", "--U", "[[0,1,0,0],[0,0,1,0],[0,0,0,1]]")[1]
    assert out["split"] is False and out["nonzero"] is True and out["w_coboundary"] is False
    out = run("build-voisin", "--model", "rational2.json", "--datum", "conic-datum.json",
              "--t", "[1,0,0,1]", "--U", "[[0,1,0,0],[0,0,1,0],[0,0,0,1]]")[1]
    assert out["nonzero"] and out["split_h"] is None


def test_cli_text_output():
    code, text = run("dims", "--model", "rational2.json", "--p", "1", "--output", "text")
    assert code == 0 and "dim: 1" in text.splitlines()


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("dims", "--model", str(bad), "--p", "1")[0] == 3
    assert run("dims", "--model", "rational3.json", "--p", "7")[0] == 2
    assert run("build-voisin", "--model", "rational2.json", "--datum", "conic-datum.json",
               "--t", "[1,0,0,0]", "--U", "[[0,1,0,0],[0,0,1,0],[0,0,0,1]]")[0] == 2
    assert run("build-voisin", "--model", "rational2.json", "--datum", "broken-datum.json",
               "--t", "[1,0,0,0]", "--U", "[[0,1,0,0],[0,0,1,0],[0,0,0,1]]")[0] == 2
    assert run("dims", "--model", "rational3.json", "--p", "1", "--W", "[[1,0]")[0] == 3
    with pytest.raises(SystemExit) as exc:
        cli.run(["dims", "--model", "rational3.json"])
    assert exc.value.code == 3


def test_cli_deterministic():
    argv = ["check-ks", "--model", "elms-quadric.json", "--class", "q.json"]
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        cli.run(argv, out=buf)
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]
