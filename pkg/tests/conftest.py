from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from skewdml.algebra import Poly, RatFunc, RFMatrix
from skewdml.base import BaseMap
from skewdml.skew import SkewPoint, SkewSystem

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

X = RatFunc.x()


def sys_of(g, A) -> SkewSystem:
    return SkewSystem(BaseMap(g), RFMatrix(A))


def pt(x, y) -> SkewPoint:
    return SkewPoint.of(x, y)


small_ints = st.integers(-9, 9)
rats = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))


def polys(max_degree=3, coeffs=small_ints):
    return st.lists(coeffs, max_size=max_degree + 1).map(Poly)


def nonzero_polys(max_degree=3):
    return polys(max_degree).filter(bool)


def ratfuncs(max_degree=2):
    return st.builds(RatFunc, polys(max_degree), nonzero_polys(max_degree))


def poly_matrices(max_n=4, max_degree=3, square=False):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        m = n if square else draw(st.integers(1, max_n))
        return [[draw(polys(max_degree)) for _ in range(m)] for _ in range(n)]

    return build()


@pytest.fixture
def x():
    return X
