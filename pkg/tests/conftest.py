import random

import pytest

from pseudosym import Catalog, Chart, CurvatureBundle, Metric, builtin


@pytest.fixture(scope="session")
def ibh4():
    return CurvatureBundle(builtin("ibh4"))


@pytest.fixture(scope="session")
def ibh5():
    return CurvatureBundle(builtin("ibh5"))


@pytest.fixture(scope="session")
def cat4(ibh4):
    return Catalog(ibh4)


@pytest.fixture(scope="session")
def cat5(ibh5):
    return Catalog(ibh5)


def random_metric(rng, n=4, signature=None):
    """Diagonal metric whose entries are ``s (a + b x_j^k)`` in one coordinate each."""
    coords = tuple(f"x{i}" for i in range(n))
    sig = signature or (-1,) + (1,) * (n - 1)
    diag = []
    for i in range(n):
        a, b = rng.randint(1, 3), rng.randint(1, 2)
        j, k = rng.randrange(n), rng.choice((1, 2))
        diag.append(f"{'-' if sig[i] < 0 else ''}({a} + {b}*x{j}^{k})")
    return Metric(Chart(coords, sig), diag, name="random")


@pytest.fixture
def rng():
    return random.Random(20240521)
