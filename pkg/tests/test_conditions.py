import pytest

from pseudosym import CurvatureBundle, builtin
from pseudosym.conditions import (FAILS, HOLDS, classify_ricci, negative_suite, shuffled_pivots,
                                  solve_linear_combination, solve_proportionality, solve_roter,
                                  solve_weyl_pair)
from pseudosym.exprparse import parse_expr


def E(b, s):
    return parse_expr(s, b.field)


def test_proportionality_recovers_L1(ibh4, cat4):
    rep = solve_proportionality(cat4["R.R"], cat4["Q(g,R)"], coefficient="L1")
    assert rep.verdict == HOLDS
    assert rep.coefficients["L1"] == E(ibh4, "(xi - t*xi')/t^3")


def test_proportionality_fails_for_unrelated_tensors(cat4):
    rep = solve_proportionality(cat4["R.R"], cat4["Q(S,R)"])
    assert rep.verdict == FAILS
    assert not rep.residual.is_zero()


def test_pivot_independence(cat4):
    X, Y = cat4["C.R"], cat4["Q(g,R)"]
    base = solve_proportionality(X, Y).coefficients["L"]
    for seed in range(5):
        rep = solve_proportionality(X, Y, pivot_order=shuffled_pivots(Y, seed))
        assert rep.coefficients["L"] == base


def test_linear_combination(ibh4, cat4):
    target = cat4["Q(g,R)"].scale(E(ibh4, "t")) + cat4["Q(S,R)"].scale(E(ibh4, "xi"))
    rep = solve_linear_combination(target, [("a", cat4["Q(g,R)"]), ("b", cat4["Q(S,R)"])])
    assert rep.verdict == HOLDS
    assert rep.coefficients["a"] == E(ibh4, "t") and rep.coefficients["b"] == E(ibh4, "xi")


def test_roter_ibh5(ibh5):
    rep = solve_roter(ibh5)
    assert rep.verdict == HOLDS
    assert rep.coefficients["phi"] == E(ibh5, "-t^2*(12*xi + t*(t*xi'' - 6*xi'))/(3*xi' - t*xi'')^2")


def test_weyl_pair(ibh4):
    rep = solve_weyl_pair(ibh4)
    assert rep.verdict == HOLDS
    assert rep.coefficients["alpha"] == E(ibh4, "-(t*xi'' + 2*xi')/(2*t^2)")


@pytest.mark.parametrize("name", ["ibh4", "ibh5"])
def test_classification_black_holes(name, request):
    c = classify_ricci(request.getfixturevalue(name))
    assert not c.einstein
    assert not c.quasi_einstein
    assert c.two_quasi_einstein
    assert not c.codazzi_type
    assert not c.cyclic_parallel
    assert not c.ricci_semisymmetric
    assert c.min_rank == 2


def test_classification_ibh4_alphas(ibh4):
    c = classify_ricci(ibh4)
    assert c.generic_rank == 4
    got = {str(a) for a in c.alphas}
    assert {str(E(ibh4, "-xi''/t")), str(E(ibh4, "-2*xi'/t^2"))} == got


@pytest.mark.parametrize("name", ["schwarzschild", "minkowski4"])
def test_classification_einstein(name):
    c = classify_ricci(CurvatureBundle(builtin(name)))
    assert c.einstein


def test_negative_suite_ibh4(ibh4):
    reps = negative_suite(ibh4)
    assert len(reps) > 20
    assert all(r.matches_claim for r in reps), [r.conditionId for r in reps if not r.matches_claim]
