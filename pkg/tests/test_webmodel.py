import pytest
from gmpy2 import mpq

from webgeom.algebra import RatFunc
from webgeom.errors import MathRefusal
from webgeom.jets import expand
from webgeom.webmodel import (
    INFINITY,
    Foliation,
    ImplicitWeb,
    chart_rotate,
    discriminant_web,
    implicit_from_slopes,
    make_web,
    pullback,
    subwebs,
    superpose,
    tangency,
    to_slopes,
    validate,
)

x, y = RatFunc.x(), RatFunc.y()


def test_slopes_of_first_integrals():
    w = make_web(x, y, x + y, x * y)
    assert to_slopes(w) == [INFINITY, RatFunc(0), RatFunc(-1), -y / x]


def test_origin_is_used_when_smooth():
    assert make_web(x, y, x + y).base == (0, 0)


def test_base_point_search_skips_singular_origin():
    w = make_web(x, y, x / y, (1 - y) / (1 - x))
    assert w.base != (0, 0)
    assert validate(w).smooth_at_base


def test_validation_reports_tangent_pairs():
    w = make_web(x, x + y * y, y, base=(0, 0))
    rep = validate(w)
    assert not rep.smooth_at_base
    assert rep.offending_pairs == [(0, 1)]


def test_validation_refuses_singular_foliation():
    with pytest.raises(MathRefusal):
        validate(make_web(x * x + y * y, x, y, base=(0, 0)))


def test_a_web_needs_two_foliations():
    with pytest.raises(ValueError):
        make_web(x)


def test_closed_form_must_be_closed():
    Foliation.closed_form(y, x)
    with pytest.raises(MathRefusal):
        Foliation.closed_form(y, -x)


def test_slope_foliation_integrates_to_a_first_integral_jet():
    f = Foliation.slope(RatFunc(2) * x)
    u = f.first_integral_jet((0, 0), 6)
    # leaves are y = x^2 + c, so u is a function of y - x^2
    du = u.diff("x") + u.diff("y") * expand(2 * x, (0, 0), 5)
    assert du.is_zero()


def test_implicit_web_and_discriminant():
    w = make_web(x, y, x + y, base=(1, 1))
    w = chart_rotate(w, 1)
    iw = implicit_from_slopes(w)
    assert iw.k == 3
    rep = discriminant_web(iw)
    assert rep.poly.is_ground  # slopes never collide


def test_tangency_of_two_webs():
    p = RatFunc.x()  # placeholder to build UniPolys below
    from webgeom.algebra import UniPoly

    w1 = ImplicitWeb(UniPoly.from_roots([x, y], "p"), (0, 0))
    w2 = ImplicitWeb(UniPoly.from_roots([RatFunc(0)], "p"), (0, 0))
    assert tangency(w1, w2) == (x * y).num
    with pytest.raises(MathRefusal):
        tangency(w1, w1)
    assert p is not None


def test_subwebs_and_superposition():
    w = make_web(x, y, x + y, x - y)
    assert len(subwebs(w, 3)) == 4
    assert superpose(w, x + 2 * y).k == 5
    with pytest.raises(ValueError):
        subwebs(w, 5)


def test_pullback_composes_first_integrals():
    w = make_web(x, y, x + y)
    p = pullback(w, x, y + x * x, (0, 0))
    assert [f.data[0] for f in p.foliations] == [x, y + x * x, x + y + x * x]
    with pytest.raises(ValueError):
        pullback(w, x + 1, y, (0, 0))


def test_chart_rotation_removes_vertical_slopes():
    w = chart_rotate(make_web(x, y, x + y), 2)
    assert INFINITY not in to_slopes(w)
    assert w.base == (mpq(0), mpq(0))
