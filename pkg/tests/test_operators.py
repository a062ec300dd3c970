import pytest

from pseudosym import Catalog, CurvatureBundle, builtin
from pseudosym.catalog import parse_label
from pseudosym.operators import action, identity_suite, kulkarni_nomizu, tachibana

from conftest import random_metric


def test_kulkarni_nomizu_is_generalized_curvature(ibh4):
    A = kulkarni_nomizu(ibh4.g(), ibh4.ricci())
    A.check_symmetry()
    assert (kulkarni_nomizu(ibh4.ricci(), ibh4.g()) - A).is_zero()


def test_kulkarni_nomizu_rejects_non_symmetric(ibh4):
    from pseudosym.tensor import Tensor
    T = Tensor(ibh4.field, 2, 4, {(0, 1): 1})
    with pytest.raises(ValueError):
        kulkarni_nomizu(T, ibh4.g())


def test_q_g_g_vanishes(ibh4):
    assert tachibana(ibh4.g(), ibh4.g()).is_zero()
    assert tachibana(ibh4.ricci(), ibh4.ricci()).is_zero()


def test_action_on_metric_vanishes(ibh4):
    # the curvature endomorphism is skew with respect to g
    assert action(ibh4.riemann(), ibh4.g(), ibh4.metric.inverse_diagonal).is_zero()


def test_ranks(cat4):
    assert cat4["R.S"].rank == 4
    assert cat4["C.R"].rank == 6
    assert cat4["Q(S,R)"].rank == 6


def test_labels():
    assert parse_label("R·C") == ("action", "R", "C")
    assert parse_label("Q( S , W )") == ("Q", "S", "W")
    with pytest.raises(KeyError):
        parse_label("X.R")


def test_identity_suite_ibh(ibh4, ibh5):
    for b in (ibh4, ibh5):
        checks = identity_suite(b)
        assert len(checks) == 14
        assert all(c.holds for c in checks), [c.id for c in checks if not c.holds]


def test_identity_suite_schwarzschild():
    assert all(c.holds for c in identity_suite(CurvatureBundle(builtin("schwarzschild"))))


def test_identity_suite_random_metrics():
    import random
    rng = random.Random(7)
    for _ in range(3):
        b = CurvatureBundle(random_metric(rng))
        assert all(c.holds for c in identity_suite(b))


def test_catalog_memoises(ibh4):
    c = Catalog(ibh4)
    assert c["R.R"] is c["R . R"]
