import json
import xml.etree.ElementTree as ET

import pytest

from lambdapq import cli
from lambdapq.algebra import make_lambda
from lambdapq.complexes import ProjComplex, ProjMap, direct_sum, stalk
from lambdapq.equiv import nakayama_nu
from lambdapq.linalg import Matrix
from lambdapq.silting import FanError, make_C


def write(path, X):
    path.write_text(X.dumps())
    return str(path)


def run(argv, tmp_path):
    out = tmp_path / "out.json"
    code = cli.main(argv + ["--out", str(out)])
    return code, (out.read_text() if out.exists() else None)


def test_algebra(tmp_path):
    code, text = run(["algebra", "2", "1"], tmp_path)
    data = json.loads(text)
    assert code == 0 and data["dim"] == 7 and data["cartan"] == [[1, 1], [2, 3]]
    assert cli.main(["algebra", "0", "0"]) == cli.INVALID
    assert cli.main(["algebra", "-1", "2"]) == cli.INVALID


def test_check_flags_and_exit_codes(tmp_path):
    A = make_lambda(2, 1)
    good = write(tmp_path / "c01.json", direct_sum(make_C(0, A), make_C(1, A)))
    code, text = run(["check", good], tmp_path)
    assert code == 0 and json.loads(text)["tilting"]

    bad = {"algebra": {"p": 2, "q": 1}, "terms": {"-1": [0, 1], "0": [1, 0], "1": [0, 1]},
           "diff": {"-1": [[[0, 0, 0, 0, 1, 0, 0]]], "0": [[[0, 0, 1, 0, 0, 0, 0]]]}}
    (tmp_path / "bad.json").write_text(json.dumps(bad))
    assert cli.main(["check", str(tmp_path / "bad.json")]) == cli.NOT_SQUARE_ZERO

    shape = {"algebra": {"p": 2, "q": 1}, "terms": {"-1": [1, 0], "0": [0, 1]},
             "diff": {"-1": [[[0, 0, 1]]]}}
    (tmp_path / "shape.json").write_text(json.dumps(shape))
    assert cli.main(["check", str(tmp_path / "shape.json")]) == cli.BAD_SHAPE

    (tmp_path / "junk.json").write_text("{not json")
    assert cli.main(["check", str(tmp_path / "junk.json")]) == cli.INVALID
    assert cli.main(["check", str(tmp_path / "missing.json")]) == cli.INVALID


def test_mutate_and_determinism(tmp_path):
    A = make_lambda(2, 2)
    lam = write(tmp_path / "lam.json", stalk(A, (1, 1)))
    c1, t1 = run(["mutate", lam, "--summand", "0", "--direction", "+", "--seed", "3"], tmp_path)
    c2, t2 = run(["mutate", lam, "--summand", "0", "--direction", "+", "--seed", "3"], tmp_path)
    assert c1 == c2 == 0 and t1 == t2


def test_walk_fan_svg_and_violation(tmp_path, monkeypatch):
    fan_json = tmp_path / "fan.json"
    assert cli.main(["walk", "2", "2", "--depth", "3", "--out", str(fan_json)]) == 0
    data = json.loads(fan_json.read_text())
    assert data["closed_form_match"] and len(data["gaps"]) == 2
    svg = tmp_path / "fan.svg"
    assert cli.main(["fan-svg", str(fan_json), "--out", str(svg)]) == 0
    root = ET.fromstring(svg.read_text())
    assert root.tag.endswith("svg")

    def broken(nodes):
        raise FanError("cones overlap")

    monkeypatch.setattr(cli, "fan", broken)
    assert cli.main(["walk", "2", "2", "--depth", "2"]) == cli.VIOLATION


def test_endo_and_reduce(tmp_path):
    A = make_lambda(2, 1)
    T = direct_sum(make_C(0, A), make_C(1, A))
    code, text = run(["endo", write(tmp_path / "t.json", T)], tmp_path)
    data = json.loads(text)
    assert code == 0 and data["dim"] == 19
    code, text = run(["reduce", write(tmp_path / "n.json", nakayama_nu(T, "-"))], tmp_path)
    assert code == 0 and json.loads(text)["exponent"] == 1


def test_classify_small(tmp_path):
    code, text = run(["classify", "2", "1", "--depth", "3", "--bound", "5", "--samples", "5"], tmp_path)
    assert code == 0


def test_argparse_errors():
    assert cli.main([]) == cli.INVALID
    assert cli.main(["walk", "2"]) == cli.INVALID
    assert cli.main(["--version"]) == 0


def test_e1_entry_rejected_as_bad_shape(tmp_path):
    A = make_lambda(2, 1)
    d = ProjMap(A, (1, 0), (0, 1), {A.alpha(0): Matrix.from_flat(1, 1, [1])})
    X = ProjComplex(A, {-1: (1, 0), 0: (0, 1)}, {-1: d})
    data = X.to_json()
    data["diff"]["-1"] = [[[1, 0, 0, 0, 0, 0, 0]]]
    (tmp_path / "e1.json").write_text(json.dumps(data))
    assert cli.main(["check", str(tmp_path / "e1.json")]) == cli.BAD_SHAPE
