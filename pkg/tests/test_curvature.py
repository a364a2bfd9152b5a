import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from webgeom.algebra import RatFunc
from webgeom.curvature import (
    blaschke_formula,
    curvature3,
    curve_invariant,
    f_barycenter,
    holonomy_jet,
    is_hexagonal,
    mihaileanu_curvature,
)
from webgeom.webmodel import INFINITY, Foliation, make_web

x, y = RatFunc.x(), RatFunc.y()


@settings(max_examples=15, deadline=None)
@given(st.integers(-5, 5))
def test_two_curvature_routes_agree(k):
    u = x + y + k * x * y * (x - y)
    K = curvature3(x, y, u)
    B = blaschke_formula(u)
    assert K(0, 0) == B(0, 0) == 4 * k


def test_curvature_is_symmetric_under_reordering():
    fols = [x, y, x + y + x * y * (x - y)]
    values = {curvature3(*p)(0, 0) for p in itertools.permutations(fols)}
    assert values == {4}


def test_curvature_ignores_reparametrizing_first_integrals():
    u = x + y + x * y * (x - y)
    assert curvature3(x, y, u)(0, 0) == curvature3(x**3 + x, y / (1 - y), u)(0, 0)


def test_mihaileanu_sums_subweb_curvatures():
    w = make_web(x, y, x - y, x + y + x * y * (x - y))
    K = mihaileanu_curvature(w)
    parts = [curvature3(*c) for c in itertools.combinations(w.foliations, 3)]
    for pt in [(0, 0), (1, 2), (-1, 3)]:
        assert K(*pt) == sum(c(*pt) for c in parts)


def test_holonomy_of_hexagonal_web_is_trivial():
    h = holonomy_jet(x, y, x + y, 6, base=(0, 0))
    assert h.is_identity()


def test_holonomy_cubic_term_tracks_curvature():
    assert str(holonomy_jet(x, y, x + y + 2 * x * y * (x - y), 3, base=(0, 0))) == "s + 8*s^3"


def test_is_hexagonal():
    assert is_hexagonal(make_web(x, y, x * y))
    assert not is_hexagonal(make_web(x, y, x + y + x * y * (x - y)))


def test_barycenter_of_slopes():
    assert f_barycenter(0, [1, -1]) is INFINITY  # 1/1 + 1/(-1) = 0
    assert f_barycenter(0, [1, 3]) == 3 / RatFunc(2)
    assert f_barycenter(INFINITY, [0, 1]) == 1 / RatFunc(2)


def test_invariant_curve():
    assert curve_invariant(x, (x - 1).num)
    assert curve_invariant(Foliation.slope(RatFunc(0)), x.num) is False
