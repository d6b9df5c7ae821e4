import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from graphalg import __version__
from graphalg.cli import main, parse_subgroup
from graphalg.graph import parse_graph
from graphalg.groups import GroupError, Integers, PermutationGroup

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "demos" / "data"
SCHEMAS = ROOT / "docs" / "schemas"


def d(name):
    return str(DATA / name)


def run(capsys, *argv):
    capsys.readouterr()
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def validated(schema, text):
    obj = json.loads(text)
    jsonschema.validate(obj, json.loads((SCHEMAS / f"{schema}.json").read_text()))
    return obj


@pytest.mark.parametrize(
    "schema, argv, code",
    [
        ("analyze", ["analyze", d("fig8.g")], 0),
        ("analyze", ["analyze", d("c3.g")], 1),
        ("analyze", ["analyze", d("two_scc.g"), "--json"], 1),
        ("analyze", ["analyze", d("inf.g")], 0),
        ("period", ["period", d("c3.g")], 0),
        ("period", ["period", d("p23.g"), "--base", "b"], 0),
        ("period", ["period", d("two_scc.g")], 0),
        ("closure", ["closure", d("two_scc.g"), "--set", "w"], 0),
        ("skew", ["skew", d("c3.g"), "--group", "Zn:6", "--labels", d("ones.lbl"), "--components", "--json"], 0),
        ("skew", ["skew", d("c3.g"), "--group", "Z", "--labels", d("ones.lbl"), "--window", "0..3", "--components", "--json"], 0),
        ("voltage", ["voltage", d("c3.g"), "--group", "Z", "--labels", d("ones.lbl")], 0),
        ("cohomologous", ["cohomologous", d("c3.g"), "--group", "Z", "--labels1", d("ones.lbl"), "--labels2", d("shifted.lbl")], 0),
        ("cover-verify", ["cover", "verify", d("c6.g"), d("c3.g"), "--map", d("dbl.map")], 0),
        ("cover-decompose", ["cover", "decompose", d("c6.g"), d("c3.g"), "--map", d("dbl.map")], 0),
        ("cover-decompose", ["cover", "decompose", d("c6.g"), d("c3.g"), "--map", d("dbl.map"), "--per-component"], 0),
        ("afcore", ["afcore", d("c3.g"), "--bratteli", "2"], 1),
        ("afcore", ["afcore", d("p23.g"), "--bratteli", "1"], 0),
    ],
)
def test_json_outputs_match_schemas(capsys, schema, argv, code):
    got, out, _ = run(capsys, *argv)
    assert got == code
    validated(schema, out)


def test_analyze_fig8_is_simple(capsys):
    code, out, _ = run(capsys, "analyze", d("fig8.g"))
    rep = json.loads(out)
    assert code == 0 and rep["csimple"]["simple"] and rep["af_core"]["simple"]
    assert rep["period"] == 1 and rep["decomposition"]["summands"] == 1


def test_analyze_text_and_dot(capsys):
    code, out, _ = run(capsys, "analyze", d("c3.g"), "--text")
    assert code == 1 and "C*(E) simple: False" in out and "period: 3" in out
    code, out, _ = run(capsys, "analyze", d("c3.g"), "--emit-dot")
    assert code == 0 and out.startswith("digraph")


def test_skew_window_report(capsys):
    code, out, _ = run(capsys, "skew", d("c3.g"), "--group", "Z", "--labels", d("ones.lbl"), "--window", "0..6", "--components")
    assert code == 0
    body, last = out.rstrip("\n").rsplit("\n", 1)
    assert last.startswith("# components ")
    rep = json.loads(last[len("# components "):])
    assert rep["graph_components"] == 3 and rep["acyclic"] and rep["graded"]
    assert len(parse_graph(body).vertices) == 21


def test_skew_relative_product(capsys):
    spec = "perm:3:(1 2),(1 2 3)"
    code, out, _ = run(capsys, "skew", d("fig8.g"), "--group", spec, "--labels", d("fig8_s3.lbl"), "--subgroup", "(2 3)")
    assert code == 0
    g = parse_graph(out)
    assert len(g.vertices) == 3 and g.vertices[0] == "v@()"


def test_cover_verify_rejects_fold(capsys, tmp_path):
    (tmp_path / "loop.g").write_text("vertex v\nedge e v v\n")
    (tmp_path / "fold.map").write_text("vmap v v\nemap e e\nemap f e\n")
    code, out, _ = run(capsys, "cover", "verify", d("fig8.g"), tmp_path / "loop.g", "--map", tmp_path / "fold.map")
    rep = validated("cover-verify", out)
    assert code == 1 and rep == {"covering": False, "vertex": "v", "side": "out", "detail": rep["detail"]}
    code, _, err = run(capsys, "cover", "decompose", d("fig8.g"), tmp_path / "loop.g", "--map", tmp_path / "fold.map")
    assert code == 2 and "not a covering" in err


def test_cover_decompose_permutations(capsys):
    _, out, _ = run(capsys, "cover", "decompose", d("c6.g"), d("c3.g"), "--map", d("dbl.map"))
    rep = json.loads(out)
    assert rep["permutations"] == {"e1": "()", "e2": "()", "e3": "(1 2)"}
    assert rep["vertex_map"]["w3"] == "v1@(1,2)"


def test_closure_text(capsys):
    code, out, _ = run(capsys, "closure", d("c3.g"), "--set", "v1", "--text")
    assert code == 0 and out.split() == ["v1", "v2", "v3"]


@pytest.mark.parametrize(
    "argv, msg",
    [
        (["analyze"], "usage error"),
        (["analyze", "/nonexistent.g"], "error"),
        (["period", d("c3.g"), "--base", "zz"], "unknown vertex"),
        (["skew", d("c3.g"), "--group", "Q", "--labels", d("ones.lbl")], "error"),
        (["skew", d("c3.g"), "--group", "Z", "--labels", d("ones.lbl"), "--window", "3"], "bad window"),
        (["skew", d("c3.g"), "--group", "Z", "--labels", d("ones.lbl")], "infinite coset"),
        (["frobnicate"], ""),
        (["period", d("c3.g"), "--bogus"], ""),
    ],
)
def test_errors_exit_2(capsys, argv, msg):
    code, _, err = run(capsys, *argv)
    assert code == 2 and msg in err


def test_malformed_graph_reports_line(capsys, tmp_path):
    (tmp_path / "bad.g").write_text("vertex a\nedge e a b\n")
    code, _, err = run(capsys, "analyze", tmp_path / "bad.g")
    assert code == 2 and "line 2" in err


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and __version__ in out


def test_batch_keeps_input_order(capsys, tmp_path):
    for name in ["p23.g", "c3.g", "fig8.g", "two_scc.g"]:
        shutil.copy(DATA / name, tmp_path / name)
    (tmp_path / "notes.txt").write_text("ignored")
    code, out, _ = run(capsys, "analyze", "--batch", tmp_path)
    lines = out.splitlines()
    assert code == 0
    assert [json.loads(x)["graph"] for x in lines] == ["c3.g", "fig8.g", "p23.g", "two_scc.g"]
    for x in lines:
        validated("analyze", x)
    (tmp_path / "zz.g").write_text("edge e a b\n")
    code, out, err = run(capsys, "analyze", "--batch", tmp_path)
    assert code == 2 and len(out.splitlines()) == 4 and "zz.g" in err


def test_output_is_byte_identical_across_processes():
    argv = [sys.executable, "-m", "graphalg", "cover", "decompose", d("c6.g"), d("c3.g"), "--map", d("dbl.map")]
    outs = {subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(3)}
    assert len(outs) == 1
    argv = [sys.executable, "-m", "graphalg", "analyze", d("p23.g")]
    outs = {subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)}
    assert len(outs) == 1


def test_parse_subgroup():
    z = Integers()
    assert parse_subgroup("4", z).modulus == 4
    assert parse_subgroup(None, z).index() == float("inf")
    s3 = PermutationGroup.symmetric(3)
    assert parse_subgroup("(1 2 3)", s3).order() == 3
    assert parse_subgroup("all", s3).order() == 6
    with pytest.raises(GroupError):
        parse_subgroup("x", z)
