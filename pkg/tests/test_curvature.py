import pytest

from pseudosym import CurvatureBundle, DimensionError, builtin, load_metric
from pseudosym.exprparse import parse_expr


def E(b, s):
    return parse_expr(s, b.field)


def test_christoffel_ibh4(ibh4):
    gam = ibh4.christoffel()
    assert gam[(0, 0, 0)] == E(ibh4, "-(xi - t*xi')/(t^2 - 2*t*xi)")
    assert gam[(1, 0, 1)] == -gam[(0, 0, 0)]
    assert gam[(0, 2, 2)] == E(ibh4, "2*xi - t")
    assert gam[(3, 2, 3)] == E(ibh4, "cos(theta)/sin(theta)")
    assert len(gam.comps) == 2 * 8 - 2 - 1  # 8 entries up to symmetry, 3 with j = k


def test_riemann_ibh4(ibh4):
    R = ibh4.riemann()
    assert R[(0, 1, 0, 1)] == E(ibh4, "-(t^2*xi'' - 2*t*xi' + 2*xi)/t^3")
    assert R[(2, 3, 2, 3)] == E(ibh4, "2*t*xi*sin(theta)^2")
    assert R[(1, 2, 1, 2)] == E(ibh4, "-(t - 2*xi)*(t*xi' - xi)/t^2")


def test_ricci_and_scalar_ibh4(ibh4):
    S = ibh4.ricci()
    assert sorted(S.comps) == [(0, 0), (1, 1), (2, 2), (3, 3)]
    assert S[(2, 2)] == E(ibh4, "-2*xi'")
    assert ibh4.scalar() == E(ibh4, "-2*(2*xi' + t*xi'')/t^2")


def test_minkowski_is_flat():
    b = CurvatureBundle(builtin("minkowski4"))
    assert b.riemann().is_zero() and b.ricci().is_zero() and b.scalar().is_zero()


def test_schwarzschild_is_ricci_flat():
    b = CurvatureBundle(builtin("schwarzschild"))
    assert b.ricci().is_zero()
    assert not b.riemann().is_zero()


def test_convention_on_round_sphere():
    b = CurvatureBundle(load_metric({"name": "s2", "coordinates": ["theta", "phi"], "signature": [1, 1],
                                     "diagonal": ["1", "sin(theta)^2"]}))
    R, G = b.riemann(), b.G()
    assert (R + G).is_zero()  # R = -G in this sign convention
    assert b.scalar() == b.field(-2)


def test_minkowski_G_component():
    b = CurvatureBundle(builtin("minkowski4"))
    assert b.G()[(0, 1, 0, 1)] == b.field(1)


def test_dimension_guards():
    b = CurvatureBundle(builtin("minkowski3"))
    with pytest.raises(DimensionError):
        b.weyl()
    with pytest.raises(DimensionError):
        b.conharmonic()
    b.projective()
    b.concircular()
    with pytest.raises(DimensionError):
        CurvatureBundle(builtin("minkowski2")).projective()


def test_one_dimensional_chart_is_flat():
    b = CurvatureBundle(load_metric({"name": "line", "coordinates": ["t"], "signature": [-1],
                                     "diagonal": ["-t^2"]}))
    assert b.riemann().is_zero()


def test_weyl_ibh4_table(ibh4):
    C = ibh4.weyl()
    q = "(6*xi - t*(4*xi' - t*xi''))"
    assert C[(0, 1, 0, 1)] == E(ibh4, f"-{q}/(3*t^3)")
    assert C[(0, 2, 0, 2)] == E(ibh4, f"-{q}/(6*(t - 2*xi))")
    # the remaining components follow from the Weyl tensor being trace-free
    assert C[(1, 2, 1, 2)] == E(ibh4, f"(t - 2*xi)*{q}/(6*t^2)")
    assert C[(2, 3, 2, 3)] == E(ibh4, f"t*sin(theta)^2*{q}/3")


def test_covariant_derivative_of_metric_vanishes(ibh5):
    assert ibh5.covariant_derivative(ibh5.g()).is_zero()


def test_concurrent_access_is_consistent(ibh4):
    from concurrent.futures import ThreadPoolExecutor
    b = CurvatureBundle(builtin("ibh4"))
    with ThreadPoolExecutor(4) as pool:
        results = list(pool.map(lambda _: b.weyl(), range(8)))
    assert all(r is results[0] for r in results)
