import random

import pytest
import sympy as sp

from webgeom.algebra import RatFunc
from webgeom.cli.parser import parse_ratfunc
from webgeom.errors import MathRefusal
from webgeom.linearize import (
    degree_at_base,
    interpolating_ode,
    is_linear,
    is_linearizable,
    liouville_tensor,
    pullback_trivial_ode,
)
from webgeom.webmodel import chart_rotate, make_web, pullback

x, y = RatFunc.x(), RatFunc.y()
sx, sy, sp_p = sp.symbols("x y p")


def _sympy_pullback(X, Y):
    """Independent derivation of the pulled-back trivial ODE with sympy."""
    P = (sp.diff(Y, sx) + sp_p * sp.diff(Y, sy)) / (sp.diff(X, sx) + sp_p * sp.diff(X, sy))
    ypp = sp.together(-(sp.diff(P, sx) + sp_p * sp.diff(P, sy)) / sp.diff(P, sp_p))
    num, den = sp.fraction(ypp)
    poly = sp.Poly(num, sp_p)
    return [sp.cancel(poly.coeff_monomial(sp_p**n) / den) for n in (3, 2, 1, 0)]


def _to_sympy(f: RatFunc):
    return sp.sympify(str(f).replace("^", "**"), locals={"x": sx, "y": sy})


MAPS = [("x/(1+x)", "y/(1+x)"), ("x", "y+x^3"), ("x+y^2", "y+x^2"), ("x*(1+y)", "y+x*y^2")]


@pytest.mark.parametrize("X,Y", MAPS)
def test_pulled_back_coefficients_match_sympy(X, Y):
    X, Y = parse_ratfunc(X), parse_ratfunc(Y)
    ours = pullback_trivial_ode(X, Y)
    oracle = _sympy_pullback(_to_sympy(X), _to_sympy(Y))
    for a, b in zip(ours, oracle):
        assert sp.simplify(_to_sympy(a) - b) == 0


@pytest.mark.parametrize("X,Y", MAPS)
def test_tensor_vanishes_on_pulled_back_trivial_ode(X, Y):
    coeffs = pullback_trivial_ode(parse_ratfunc(X), parse_ratfunc(Y))
    assert liouville_tensor(*coeffs).is_zero()


def test_doubled_term_variant_is_not_invariant():
    coeffs = pullback_trivial_ode(x + y**2, y + x**2)
    assert not liouville_tensor(*coeffs, doubled_term=True).is_zero()


def test_random_projective_maps():
    rng = random.Random(11)
    for _ in range(3):
        a = [rng.randint(-3, 3) for _ in range(9)]
        den = a[6] * x + a[7] * y + a[8] + 5
        X = (a[0] * x + a[1] * y + a[2] + 1) / den
        Y = (a[3] * x + a[4] * y + a[5] + 2) / den
        try:
            coeffs = pullback_trivial_ode(X, Y)
        except MathRefusal:
            continue
        assert all(c.is_zero() for c in coeffs)  # projective maps send lines to lines


def test_is_linear():
    assert is_linear(make_web(x, y, x + y, x - y))
    assert not is_linear(make_web(x, y, x + y, y - x**2))


def test_interpolating_ode_of_linear_web_is_trivial():
    w = chart_rotate(make_web(x, y, x + y, x - y), 2)
    assert interpolating_ode(w).F.is_zero()
    assert degree_at_base(w) == -1


def test_pullback_of_parallel_web_is_linearizable():
    w = chart_rotate(pullback(make_web(x, y, x + y, x - y), x, y + x**2, (0, 0)), 2)
    v = is_linearizable(w)
    assert v.linearizable and not is_linear(w)
    assert v.ode.degree == 3


def test_three_webs_are_refused():
    with pytest.raises(MathRefusal):
        is_linearizable(make_web(x, y + x, x - y))
