from __future__ import annotations

import json

import pytest

from fpbrace.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    lines = capsys.readouterr().out.strip().splitlines()
    return code, [json.loads(line) for line in lines]


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return _write


def test_field_info(capsys):
    code, [doc] = run(capsys, "field", "info", "--p", "5")
    assert code == 0 and doc["q"] == 2 and doc["size"] == 5
    code, [doc] = run(capsys, "field", "info", "--p", "3", "--k", "2")
    assert doc["q"] == [1, 1] and doc["field"]["modulus"] == [1, 0, 1]
    code, [doc] = run(capsys, "field", "info", "--p", "9")
    assert code == 1 and doc["error"] == "NotPrime"
    code, [doc] = run(capsys, "field", "info", "--p", "3", "--k", "2", "--modulus", "1", "1", "1")
    assert code == 1 and doc["error"] == "ReducibleModulus"


def test_usage_errors(capsys):
    code, [doc] = run(capsys, "field", "info")
    assert code == 2 and doc["error"] == "UsageError"
    code, _ = run(capsys, "nosuch")
    assert code == 2


def test_theta_validate(capsys, write):
    f = write("t.json", {"field": {"p": 3}, "theta": [[1, 1], [1, 1]]})
    code, [doc] = run(capsys, "theta", "validate", f)
    assert code == 0 and not doc["valid"] and doc["vanishing_combination"] == [1, 2]
    f = write("t.json", {"field": {"p": 3}, "theta": [[0, 1], [1, 0]]})
    _, [doc] = run(capsys, "theta", "validate", f)
    assert doc["valid"]


def test_algebra_verify(capsys, write):
    f = write("a.json", {"field": {"p": 3}, "theta": [[1]]})
    code, [doc] = run(capsys, "algebra", "verify", f, "--exhaustive")
    assert code == 0
    for key in ("left_brace", "right_brace", "bibrace", "gamma_homomorphism", "exponent_p"):
        assert doc[key]["pass"] and doc[key]["mode"] == "exhaustive"
    assert doc["nilpotency_index"] == 3 and all(doc["subgroup"].values())
    code, [doc] = run(capsys, "algebra", "verify", f, "--seed", "9", "--samples", "50")
    assert doc["bibrace"]["seed"] == 9
    bad = write("b.json", {"field": {"p": 3}, "theta": [[1, 1], [1, 1]]})
    code, [doc] = run(capsys, "algebra", "verify", bad)
    assert code == 1 and doc["error"] == "InvalidDefiningMatrix"


def test_classify_commands(capsys, write):
    f1 = write("a.json", {"field": {"p": 3}, "theta": [[0, 1], [1, 0]]})
    f2 = write("b.json", {"field": {"p": 3}, "theta": [[1, 0], [0, 2]]})
    f3 = write("c.json", {"field": {"p": 3}, "theta": [[1, 0], [0, 1]]})
    _, [doc] = run(capsys, "classify", "one", f1)
    assert doc["class"] == "nonsquare" and doc["count"] == 2 and doc["witness"]["l"] in (1, 2)
    _, [doc] = run(capsys, "classify", "pair", f1, f2)
    assert doc["isomorphic"]
    _, [doc] = run(capsys, "classify", "pair", f1, f3)
    assert doc == {"isomorphic": False, "witness": None}
    _, [doc] = run(capsys, "classify", "count", "--p", "5", "--k", "2", "--n", "4")
    assert doc == {"count": 1}
    _, [doc] = run(capsys, "classify", "reps", "--p", "3", "--n", "3")
    assert doc["count"] == 2 and doc["representatives"][1]["theta"] == [[1, 0], [0, 2]]
    code, [doc] = run(capsys, "classify", "count", "--p", "2", "--n", "3")
    assert code == 1 and doc["error"] == "EvenCharacteristic"


def test_form_diagonalize(capsys, write):
    f = write("m.json", {"field": {"p": 3}, "rows": [[0, 1], [1, 0]]})
    _, [doc] = run(capsys, "form", "diagonalize", f)
    assert doc["A"] == [[1, 1], [1, 2]] and doc["D"] == [[2, 0], [0, 1]]
    assert doc["discriminant"] == "NonSquare" and doc["canonical"]["label"] == {"rank": 2, "disc": "NonSquare"}
    f = write("m.json", {"field": {"p": 3}, "rows": [[1, 1], [1, 1]]})
    _, [doc] = run(capsys, "form", "diagonalize", f)
    assert doc["rank"] == 1 and doc["canonical"] is None


def test_oracle_classes(capsys):
    code, docs = run(capsys, "oracle", "classes", "--p", "3", "--m", "2", "--jsonl")
    assert code == 0 and len(docs) == 19
    assert docs[-1]["count"] == 2 and sum(docs[-1]["class_sizes"]) == 18
    assert {d["class"] for d in docs[:-1]} == {0, 1}
    _, [doc] = run(capsys, "oracle", "classes", "--p", "3", "--m", "1", "--via", "iso_test")
    assert doc["count"] == 1


def test_oracle_subgroups(capsys):
    _, [doc] = run(capsys, "oracle", "subgroups", "--p", "3", "--n", "2")
    assert doc["total"] == 9 and doc["census"] == {"theta_d1": 8, "translation": 1}


def test_table_output(capsys):
    assert main(["--table", "classify", "count", "--p", "3", "--n", "3"]) == 0
    assert capsys.readouterr().out.split() == ["count", "2"]
