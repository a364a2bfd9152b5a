import pytest
from gmpy2 import mpq

from webgeom.algebra import RatFunc, total_degree
from webgeom.curvature import is_hexagonal
from webgeom.dualweb import (
    AbelianDifferential,
    ParamCurve,
    PlaneCurve,
    abelian_basis,
    branch_jets,
    dual_discriminant,
    dual_implicit,
    dual_web_of_lines,
    find_splitting_line,
    is_abelian_parametrized,
    laurent,
    rank_dual,
    residue,
    trace_form,
    trace_monomial,
)
from webgeom.errors import MathRefusal
from webgeom.jets import expand

x, y = RatFunc.x(), RatFunc.y()
t = RatFunc.x()  # parametrized curves use the first ring variable


def test_plane_curve_validation():
    assert PlaneCurve(y - x**2).k == 2
    with pytest.raises(ValueError):
        PlaneCurve((y - x) ** 2)
    with pytest.raises(ValueError):
        PlaneCurve(RatFunc(3))


def test_dual_of_parabola():
    P = dual_implicit(y - x**2).slope_poly
    assert P.degree() == 2
    assert total_degree(dual_discriminant(y - x**2)) == 2


def test_dual_of_three_lines_is_hexagonal():
    w = dual_web_of_lines(x * y * (x + y - 1))
    assert w.k == 3 and is_hexagonal(w)
    with pytest.raises(MathRefusal):
        dual_web_of_lines(y - x**2)


def test_splitting_line_gives_rational_points():
    C = y**2 - x**2 * (x + 1)
    a, b = find_splitting_line(C)
    S = branch_jets(C, (a, b), order=4)
    assert S.k == 3
    for xv, yv in zip(S.xs(), S.ys):
        assert C(xv.value(), yv.value()) == 0


def test_branches_satisfy_the_curve_equation_as_jets():
    C = y**2 - x**2 * (x + 1)
    S = branch_jets(C, order=5)
    F = C.num
    for xv, yv in zip(S.xs(), S.ys):
        val = expand(RatFunc(0), S.base, 5)
        for (i, j), c in F.terms():
            val = val + (xv**i) * (yv**j) * mpq(c)
        assert val.is_zero()
    assert S.shock_holds()


def test_abelian_basis_sizes():
    assert abelian_basis(y - x**2) == []
    assert len(abelian_basis(x**4 + y**4 + 1)) == 3


def test_trace_of_abelian_differential_on_cubic():
    C = y**2 - x**2 * (x + 1)
    S = branch_jets(C, order=6)
    assert trace_form(C, AbelianDifferential(RatFunc(1).num), S).is_zero()
    assert not trace_form(C, AbelianDifferential(x.num), S).is_zero()


def test_monomial_traces():
    assert str(trace_monomial(0, 2)) == "0"
    assert str(trace_monomial(1, 2)) == "dy"
    assert str(trace_monomial(3, 2)) == "y dy"
    assert str(trace_monomial(-1, 3)) == "y^-1 dy"
    assert trace_monomial(2, 3).exponent == 0


def test_laurent_and_residue():
    assert residue(1 / t, 0) == 1
    assert residue(1 / t**2, 0) == 0
    assert residue(2 * t / (t**2 - 1), 1) == 1
    v, c = laurent((1 + t) / t**2, 0, 3)
    assert v == -2 and c == [1, 1, 0]


def test_parametrized_smooth_conic_has_no_abelian_forms():
    P = ParamCurve(t, t**2)
    assert not is_abelian_parametrized(P, 1 / t)
    assert is_abelian_parametrized(P, RatFunc(0))


def test_missing_singular_fiber_is_refused():
    P = ParamCurve(t**2, t**3)
    with pytest.raises(MathRefusal):
        is_abelian_parametrized(P, 1 / t**2)


def test_fiber_must_be_a_single_point():
    with pytest.raises(ValueError):
        ParamCurve(t**2, t**3, [[0, 1]])


def test_rank_of_dual_of_conic():
    rep = rank_dual(y - x**2)
    assert rep.rank_estimate == 0
    assert rep.details["numeric"] is False
