import json

import pytest

from pseudosym.chart import (Chart, MetricError, WarpedSpec, builtin, load_metric, metric_to_document,
                             warped_curvature, warped_metric)
from pseudosym.curvature import CurvatureBundle
from pseudosym.exprparse import parse_expr


def test_builtins_have_expected_shape():
    assert builtin("ibh4").n == 4
    assert builtin("ibh5").coordinates == ("t", "z", "theta", "phi", "psi")
    assert builtin("minkowski(6)").n == 6
    assert builtin("schwarzschild").field.constants == ("m",)


def test_inverse_diagonal():
    m = builtin("ibh5")
    for a, b in zip(m.diagonal, m.inverse_diagonal):
        assert (a * b) == m.field.one


@pytest.mark.parametrize("doc, message", [
    ({"name": "x", "coordinates": ["t", "t"], "signature": [-1, 1], "diagonal": ["1", "1"]}, "unique"),
    ({"name": "x", "coordinates": ["t"], "signature": [-1, 1], "diagonal": ["1"]}, "signature"),
    ({"name": "x", "coordinates": ["t"], "signature": [1], "diagonal": ["t - t"]}, "zero"),
    ({"name": "x", "coordinates": ["t"], "signature": [1], "diagonal": ["q"]}, "unknown identifier"),
    ({"name": "x", "coordinates": ["t"], "signature": [1]}, "diagonal"),
])
def test_invalid_documents(doc, message):
    with pytest.raises(MetricError, match=message):
        load_metric(doc)


def test_document_round_trip(tmp_path):
    m = builtin("schwarzschild")
    path = tmp_path / "m.json"
    path.write_text(json.dumps(metric_to_document(m)))
    m2 = load_metric(str(path))
    assert m2.diagonal == m.diagonal


def test_substitute_xi_metric():
    m = builtin("ibh4").substitute_xi("C1*t")
    assert "C1" in m.field.constants
    assert m.diagonal[1] == parse_expr("2*C1 - 1", m.field)


@pytest.mark.parametrize("warp, fibre_diag", [
    ("t^2", ["1", "sin(theta)^2"]),
    ("t*xi + z^2", ["1", "sin(theta)^2"]),
    ("t^2 + xi", ["1 + phi^2", "2"]),
])
def test_warped_product_matches_direct_pipeline(warp, fibre_diag):
    base = load_metric({"name": "b", "coordinates": ["t", "z"], "signature": [-1, 1],
                        "diagonal": ["-1/(2*xi/t - 1)", "2*xi/t - 1"]})
    fibre = load_metric({"name": "f", "coordinates": ["theta", "phi"], "signature": [1, 1],
                         "diagonal": fibre_diag})
    spec = WarpedSpec(base, fibre, warp)
    direct = CurvatureBundle(warped_metric(spec))
    w = warped_curvature(spec)
    assert (w["R"] - direct.riemann()).is_zero()
    assert (w["S"] - direct.ricci()).is_zero()
    assert w["r"] == direct.scalar()


def test_ibh4_is_the_warped_product_with_warp_t_squared():
    base = load_metric({"name": "b", "coordinates": ["t", "z"], "signature": [-1, 1],
                        "diagonal": ["-1/(2*xi/t - 1)", "2*xi/t - 1"]})
    fibre = load_metric({"name": "s2", "coordinates": ["theta", "phi"], "signature": [1, 1],
                         "diagonal": ["1", "sin(theta)^2"]})
    w = warped_curvature(WarpedSpec(base, fibre, "t^2"))
    ibh4 = CurvatureBundle(builtin("ibh4"))
    assert (w["R"] - ibh4.riemann()).is_zero()


def test_warp_depending_on_fibre_is_rejected():
    base = load_metric({"name": "b", "coordinates": ["t"], "signature": [-1], "diagonal": ["-1"]})
    fibre = load_metric({"name": "f", "coordinates": ["x"], "signature": [1], "diagonal": ["1"]})
    with pytest.raises(MetricError):
        warped_metric(WarpedSpec(base, fibre, parse_expr("x", Chart(("t", "x"), (-1, 1)).field)))
