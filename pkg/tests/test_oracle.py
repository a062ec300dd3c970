import math

import pytest

from pseudosym import CurvatureBundle, builtin
from pseudosym.exprparse import parse_expr
from pseudosym.oracle import (EvalPoint, OracleError, XiForm, compare_bundle, eval, fd_curvature,
                              numeric_zero, sample_points)


def test_eval_scalar_curvature(ibh4):
    p = EvalPoint({"t": 2.0, "z": 0.3, "theta": 1.0, "phi": 0.4}, XiForm("t**2"))
    assert eval(ibh4.scalar(), p) == pytest.approx(-6.0)


def test_eval_metric_component(ibh4):
    p = EvalPoint({"t": 4.0, "z": 0.0, "theta": 1.0, "phi": 0.0}, XiForm("t**2"))
    assert eval(parse_expr("2*xi/t - 1", ibh4.field), p) == pytest.approx(7.0)


def test_singular_point_names_the_factor(ibh4):
    p = EvalPoint({"t": 2.0, "z": 0.0, "theta": 1.0, "phi": 0.0}, XiForm("1 + 0*t"))
    with pytest.raises(OracleError, match="t - 2\\*xi"):
        eval(ibh4.ricci()[(0, 0)], p)


def test_transcendental_tower():
    x = XiForm("sqrt(t)*cos(sqrt(7)/2*log(t))")
    v = x.tower(2.0, 2)
    h = 1e-5
    f = lambda s: math.sqrt(s) * math.cos(math.sqrt(7) / 2 * math.log(s))  # noqa: E731
    assert v[1] == pytest.approx((f(2 + h) - f(2 - h)) / (2 * h), rel=1e-8)


@pytest.mark.parametrize("name, xi", [("ibh4", "t**3/7 + t**2/3 + 2"), ("ibh5", "t**4/9 + t**2/2 + 3"),
                                      ("schwarzschild", None)])
def test_exact_matches_finite_differences(name, xi):
    m = builtin(name)
    b = CurvatureBundle(m)
    pts = sample_points(m, 3, seed=5, xi=XiForm(xi) if xi else None, constants={"m": 1.0})
    for p in pts:
        worst, failures = compare_bundle(b, p)
        assert not failures
        assert worst < 1e-6


def test_second_order_stencil_converges_quadratically(ibh4):
    p = EvalPoint({"t": 1.7, "z": 0.5, "theta": 1.1, "phi": 0.3}, XiForm("t**3/7 + t**2/3 + 2"))
    exact = eval(ibh4.riemann()[(0, 1, 0, 1)], p)
    e1 = abs(fd_curvature(ibh4.metric, p, h=4e-3, order=2).riemann[0][1][0][1] - exact)
    e2 = abs(fd_curvature(ibh4.metric, p, h=2e-3, order=2).riemann[0][1][0][1] - exact)
    assert 3.0 < e1 / e2 < 5.0


def test_step_underflow(ibh4):
    p = EvalPoint({"t": 1.7, "z": 0.5, "theta": 1.1, "phi": 0.3}, XiForm("t**2 + 3"))
    with pytest.raises(OracleError):
        fd_curvature(ibh4.metric, p, h=1e-14)


def test_numeric_zero(cat4):
    T = cat4["R.K"] - cat4["R.C"]
    p = EvalPoint({"t": 1.7, "z": 0.5, "theta": 1.1, "phi": 0.3}, XiForm("t**2 + 3"))
    ok, worst = numeric_zero(T, p)
    assert ok and worst == 0.0
    ok, worst = numeric_zero(cat4["R.R"], p)
    assert not ok
