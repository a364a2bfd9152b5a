from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from webgeom.algebra import RatFunc, UniPoly
from webgeom.jets import (
    Jet2,
    JetForm,
    compose_uni,
    differential,
    exp_jet,
    expand,
    lift_root,
    log1p_jet,
    primitive_of_closed,
    useries_compose,
    useries_reversion,
)

x, y = RatFunc.x(), RatFunc.y()
BASE = (mpq(1, 2), mpq(-1, 3))


def test_expansion_of_polynomial_is_exact():
    J = expand(x**2 * y, (0, 0), 5)
    assert J.terms() == {(2, 1): 1}


def test_expansion_of_quotient_matches_geometric_series():
    J = expand(1 / (1 - x), (0, 0), 6)
    assert all(J.coefficient(n, 0) == 1 for n in range(7))


def test_product_and_inverse_are_consistent():
    f = expand((1 + x + y) / (2 - x * y), BASE, 6)
    g = expand(3 + x - y**2, BASE, 6)
    assert (f * g) / g == f
    assert expand(RatFunc(1) / (3 + x - y**2), BASE, 6) == g.inverse()


def test_derivative_commutes_with_expansion():
    f = (x**3 - y) / (1 + x**2)
    assert expand(f, BASE, 6).diff("x") == expand(f.diff("x"), BASE, 5)
    assert expand(f, BASE, 6).diff("y") == expand(f.diff("y"), BASE, 5)


def test_exp_log_are_inverse():
    u = Jet2.coordinate("x", (0, 0), 7) + Jet2.coordinate("y", (0, 0), 7) * 2
    assert log1p_jet(exp_jet(u) - 1) == u


def test_primitive_of_exact_form():
    f = expand(x * y + y**3, BASE, 6)
    w = differential(f)
    P = primitive_of_closed(w)
    assert P == (f - f.value()).with_order(P.order)


def test_compose_uni_matches_powers():
    u = Jet2.coordinate("x", (0, 0), 5) + Jet2.coordinate("y", (0, 0), 5)
    assert compose_uni([0, 1, 1], u) == u + u * u


def test_lift_root_of_quadratic():
    # Y^2 = 1 + x lifted at Y(0) = 1 agrees with sqrt(1 + x)
    G = UniPoly([-(1 + x), 0, 1], "y")
    Y = lift_root(G, mpq(1), (0, 0), 5)
    assert (Y * Y) == expand(1 + x, (0, 0), 5)
    assert Y.coefficient(1, 0) == mpq(1, 2)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=6))
def test_series_reversion_inverts(coeffs):
    n = 6
    f = [mpq(0), mpq(1)] + [mpq(c) for c in coeffs][: n - 1]
    f = (f + [mpq(0)] * (n + 1))[: n + 1]
    g = useries_reversion(f, n)
    comp = useries_compose(f, g, n)
    assert comp[:n + 1] == [0, 1] + [0] * (n - 1)


def test_jetform_closedness():
    w = JetForm(expand(y, (0, 0), 4), expand(x, (0, 0), 4))
    assert w.d().is_zero()
    assert not JetForm(expand(y, (0, 0), 4), expand(-x, (0, 0), 4)).d().is_zero()
