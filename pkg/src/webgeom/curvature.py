"""Curvature and holonomy of 3-webs, and Mihaileanu's sum for k-webs.

Foliations are described by defining 1-forms ``w_i = A_i dx + B_i dy``
(see :mod:`webgeom.webmodel`).  With ``d_ij`` the coefficient of
``w_i ^ w_j`` the normalized forms ``a_1 = d_23 w_1``, ``a_2 = d_31 w_2``,
``a_3 = d_12 w_3`` sum to zero, and there is a unique ``eta`` with
``d a_i = eta ^ a_i``.  The curvature is ``d eta``; it does not depend on the
order of the three foliations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import BivarPoly, format_terms, RatFunc, rf
from .errors import MathRefusal
from .jets import jet_substitute, useries_compose, useries_reversion
from .webmodel import INFINITY, PlanarWeb, _as_foliation, find_base_point


@dataclass(frozen=True)
class OneForm:
    a: RatFunc
    b: RatFunc

    def d(self) -> TwoForm:
        return TwoForm(self.b.diff("x") - self.a.diff("y"))

    def wedge(self, other: OneForm) -> TwoForm:
        return TwoForm(self.a * other.b - self.b * other.a)

    def __str__(self):
        return f"({self.a}) dx + ({self.b}) dy"


@dataclass(frozen=True)
class TwoForm:
    coeff: RatFunc

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def __call__(self, x, y):
        return self.coeff(x, y)

    def __add__(self, other: TwoForm) -> TwoForm:
        return TwoForm(self.coeff + other.coeff)

    def __str__(self):
        return f"({self.coeff}) dx^dy"


def _forms(fols):
    return [_as_foliation(f).one_form() for f in fols]


def eta_form(f1, f2, f3) -> OneForm:
    (A1, B1), (A2, B2), (A3, B3) = _forms((f1, f2, f3))
    d23 = A2 * B3 - A3 * B2
    d31 = A3 * B1 - A1 * B3
    d12 = A1 * B2 - A2 * B1
    alphas = [OneForm(d23 * A1, d23 * B1), OneForm(d31 * A2, d31 * B2), OneForm(d12 * A3, d12 * B3)]
    (a1, b1), (a2, b2) = (alphas[0].a, alphas[0].b), (alphas[1].a, alphas[1].b)
    c1, c2, c3 = (al.d().coeff for al in alphas)
    det = a1 * b2 - a2 * b1
    if det.is_zero():
        raise MathRefusal("degenerate 3-web: two foliations coincide identically")
    h = (a1 * c2 - a2 * c1) / det
    g = (b1 * c2 - b2 * c1) / det
    eta = OneForm(h, g)
    a3, b3 = alphas[2].a, alphas[2].b
    if h * b3 - g * a3 != c3:
        raise AssertionError("d(alpha_3) != eta ^ alpha_3")
    return eta


def curvature3(f1, f2, f3) -> TwoForm:
    return eta_form(f1, f2, f3).d()


def blaschke_formula(f) -> TwoForm:
    """Curvature of ``W(x, y, f)`` as ``d/dx d/dy log(f_x / f_y)``."""
    f = rf(f)
    fx, fy = f.diff("x"), f.diff("y")
    if fx.is_zero() or fy.is_zero():
        raise MathRefusal("f_x * f_y vanishes identically")
    # d/dy log(fx/fy) = f_xy/f_x - f_yy/f_y
    dy_log = fx.diff("y") / fx - fy.diff("y") / fy
    return TwoForm(dy_log.diff("x"))


def mihaileanu_curvature(w: PlanarWeb) -> TwoForm:
    if w.k < 3:
        raise ValueError("Mihaileanu curvature needs k >= 3")
    total = RatFunc(0)
    for trio in itertools.combinations(w.foliations, 3):
        total = total + curvature3(*trio).coeff
    return TwoForm(total)


def is_hexagonal(w: PlanarWeb) -> bool:
    if w.k < 3:
        raise ValueError("hexagonality needs k >= 3")
    return all(curvature3(*trio).is_zero() for trio in itertools.combinations(w.foliations, 3))


# ---------------------------------------------------------------------------
# holonomy


def _leaf(U, n):
    """Parametrize ``{U = 0}`` through the base as ``(s, phi(s))`` or ``(phi(s), s)``."""
    ux, uy = U.coefficient(1, 0), U.coefficient(0, 1)
    by_x = uy != 0
    lin = uy if by_x else ux
    if not lin:
        raise MathRefusal("first integral is not a submersion at the base point")
    s = [0, 1] + [0] * (n - 1)
    phi = [0] * (n + 1)
    for k in range(1, n + 1):
        r = jet_substitute(U, s, phi, n) if by_x else jet_substitute(U, phi, s, n)
        phi[k] -= r[k] / lin
    return (s, phi) if by_x else (phi, s)


def _transition(U, leaf_from, leaf_to, n):
    phi = jet_substitute(U, leaf_from[0], leaf_from[1], n)
    psi = jet_substitute(U, leaf_to[0], leaf_to[1], n)
    return useries_compose(useries_reversion(psi, n), phi, n)


@dataclass
class Holonomy:
    coefficients: list
    note: str = (
        "germ on the leaf of the first foliation through the base; "
        "reordering the foliations conjugates it to itself or its inverse"
    )

    def is_identity(self) -> bool:
        return all(c == (1 if k == 1 else 0) for k, c in enumerate(self.coefficients))

    def __str__(self):
        return format_terms((c, "" if k == 0 else ("s" if k == 1 else f"s^{k}")) for k, c in enumerate(self.coefficients))


def holonomy_jet(f1, f2, f3, order: int, base=None) -> Holonomy:
    """Holonomy germ of a 3-web, truncated at ``s^order``.

    Starting on leaf ``L1`` of the first foliation through the base, the point
    is carried to ``L3`` along ``F2``, then to ``L2`` along ``F1``, then back to
    ``L1`` along ``F3``; the germ is this loop run twice.
    """
    fols = [_as_foliation(f) for f in (f1, f2, f3)]
    if base is None:
        base = find_base_point(fols)
    n = order
    U = [f.first_integral_jet(base, n) for f in fols]
    L = [_leaf(u, n) for u in U]
    t13 = _transition(U[1], L[0], L[2], n)
    t32 = _transition(U[0], L[2], L[1], n)
    t21 = _transition(U[2], L[1], L[0], n)
    loop = useries_compose(t21, useries_compose(t32, t13, n), n)
    return Holonomy(useries_compose(loop, loop, n))


# ---------------------------------------------------------------------------
# tools around Mihaileanu curvature regularity


def f_barycenter(f, slopes):
    """Barycenter of ``slopes`` seen from the direction ``f``.

    In the chart ``z(m) = 1/(m - f)`` the result is the mean of the ``z(m_i)``;
    when that mean vanishes the barycenter is vertical and INFINITY is
    returned.  ``f = INFINITY`` gives the plain mean of the slopes.
    """
    slopes = [rf(m) for m in slopes]
    if f is INFINITY:
        return sum(slopes, RatFunc(0)) / len(slopes)
    f = rf(f)
    total = RatFunc(0)
    for m in slopes:
        diff = m - f
        if diff.is_zero():
            raise MathRefusal(f"slope {m} coincides with the reference direction")
        total = total + 1 / diff
    if total.is_zero():
        return INFINITY
    return f + len(slopes) / total


def curve_invariant(f, C: BivarPoly) -> bool:
    """Whether the curve ``C = 0`` is a union of leaves of ``f``."""
    A, B = _as_foliation(f).one_form() if not isinstance(f, tuple) else f
    C = rf(C)
    wedge = A * C.diff("y") - B * C.diff("x")
    if wedge.is_zero():
        return True
    return not (wedge.num.rem(C.num))
