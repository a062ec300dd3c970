import io
import json

import pytest

from pseudosym.cli import main
from pseudosym.exprparse import parse_expr
from pseudosym import builtin


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_compute_ricci():
    code, text = run("compute", "--metric", "ibh4", "--tensor", "ricci")
    assert code == 0
    lines = text.strip().splitlines()
    assert len(lines) == 4
    assert "S_33 = -2*xi'" in lines


def test_compute_zero_tensor():
    code, text = run("compute", "--metric", "minkowski4", "--tensor", "riemann")
    assert code == 0 and text.strip() == "R: zero tensor"


def test_compute_json_roundtrip():
    code, text = run("compute", "--metric", "ibh5", "--tensor", "weyl", "--format", "json")
    assert code == 0
    doc = json.loads(text)
    assert doc["tensor"] == "C" and doc["components"]
    f = builtin("ibh5").field
    for c in doc["components"]:
        assert all(1 <= i <= 5 for i in c["index"])
        parse_expr(c["value"], f)


def test_compute_latex():
    code, text = run("compute", "--metric", "ibh4", "--tensor", "scalar", "--format", "latex")
    assert code == 0 and text.startswith("r = ")


def test_compute_with_xi():
    code, text = run("compute", "--metric", "ibh4", "--tensor", "scalar", "--xi", "t^2")
    assert code == 0 and text.strip() == "r = -12/t"


@pytest.mark.parametrize("argv", [
    ("compute", "--metric", "ibh4", "--tensor", "nosuch"),
    ("compute", "--metric", "nosuch", "--tensor", "ricci"),
    ("verify", "--metric", "ibh4", "--suite", "thm9.9"),
    ("verify", "--metric", "ibh4", "--suite", "thm4.4"),
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_verify_theorem():
    code, text = run("verify", "--metric", "ibh4", "--suite", "thm4.2")
    assert code == 0
    assert "erratum" in text


def test_verify_reports_false_corollary():
    code, text = run("verify", "--metric", "ibh4", "--suite", "cor4.2.d")
    assert code == 1 and "MISMATCH" in text


def test_verify_json():
    code, text = run("verify", "--metric", "ibh4", "--suite", "thm4.1", "--format", "json")
    assert code == 0
    doc = json.loads(text)
    f = builtin("ibh4").field
    assert {i["id"] for i in doc["items"]} == {f"thm4.1.{r}" for r in ("i", "ii", "iii", "iv", "v", "vi")}
    for item in doc["items"]:
        assert item["verdict"] == item["expected"]
        for v in item["coefficients"].values():
            parse_expr(v, f)


def test_substitute_expr():
    code, text = run("substitute", "--metric", "ibh4", "--xi", "t^3", "--expr", "xi'' * t")
    assert code == 0 and text.strip() == "6*t^2"


def test_substitute_tensor():
    code, text = run("substitute", "--metric", "ibh4", "--xi", "C1*t", "--tensor", "R.R")
    assert code == 0 and "zero tensor" in text


def test_oracle_check():
    code, text = run("oracle-check", "--metric", "ibh4", "--points", "2", "--seed", "3")
    assert code == 0 and "worst" in text
