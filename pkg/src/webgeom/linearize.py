"""Linear and linearizable webs.

Every leaf of a foliation with slope ``e`` solves ``y'' = v(e)`` where
``v = d/dx + e d/dy``.  For ``k >= 4`` distinct slopes there is exactly one
``F(x, y, p)`` of degree ``< k`` in ``p`` interpolating these values; the web
is linearizable iff ``F`` is cubic in ``p`` and the cubic ODE ``y'' = F`` is
point-equivalent to ``y'' = 0``, which is the vanishing of the Liouville
tensor built from its coefficients ``y'' = A p^3 + B p^2 + C p + D``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from gmpy2 import mpq

from .algebra import ONE, RatFunc, UniPoly, rf
from .errors import MathRefusal
from .webmodel import INFINITY, PlanarWeb


def _slopes(w: PlanarWeb, allow_vertical=False):
    out = []
    for i, f in enumerate(w.foliations):
        e = f.slope_function()
        if e is INFINITY and not allow_vertical:
            raise MathRefusal(f"foliation {i} has vertical leaves; rotate the chart first")
        out.append(e)
    return out


def _along_leaves(e: RatFunc) -> RatFunc:
    # y'' along a leaf of slope e
    return e.diff("x") + e * e.diff("y")


def is_linear(w: PlanarWeb) -> bool:
    """Whether every leaf of every foliation is a straight line."""
    # with v = d/dx + e d/dy the orbit determinant |v(x) v(y); v^2(x) v^2(y)| is v(e)
    return all(e is INFINITY or _along_leaves(e).is_zero() for e in _slopes(w, allow_vertical=True))


@dataclass(frozen=True)
class InterpolatingODE:
    F: UniPoly

    @property
    def degree(self) -> int:
        return self.F.degree()

    def coefficients(self):
        """``(A, B, C, D)`` with ``F = A p^3 + B p^2 + C p + D``."""
        if self.degree > 3:
            raise MathRefusal(f"interpolating ODE has degree {self.degree} in p, not at most 3")
        return tuple(self.F.coeff(n) for n in (3, 2, 1, 0))

    def __str__(self):
        return f"y'' = {self.F}"


def interpolating_ode(w: PlanarWeb) -> InterpolatingODE:
    if w.k < 4:
        raise MathRefusal("the interpolating ODE needs at least four foliations")
    es = _slopes(w)
    rs = [_along_leaves(e) for e in es]
    for (i, a), (j, b) in itertools.combinations(enumerate(es), 2):
        if (a - b).is_zero():
            raise MathRefusal(f"foliations {i} and {j} have the same slope")
    F = UniPoly([RatFunc(0)])
    for i, (ei, ri) in enumerate(zip(es, rs)):
        if ri.is_zero():
            continue
        term = UniPoly([ri])
        for j, ej in enumerate(es):
            if j != i:
                term = term * UniPoly([-ej, ONE]) * (1 / (ei - ej))
        F = F + term
    for i, (ei, ri) in enumerate(zip(es, rs)):
        if F(ei) != ri:
            raise AssertionError(f"interpolation residual at foliation {i}")
    return InterpolatingODE(F)


@dataclass(frozen=True)
class LiouvilleTensor:
    L1: RatFunc
    L2: RatFunc
    corrected: bool = True

    def is_zero(self) -> bool:
        return self.L1.is_zero() and self.L2.is_zero()


def liouville_tensor(A, B, C, D, doubled_term: bool = False) -> LiouvilleTensor:
    """Liouville's invariants of ``y'' = A p^3 + B p^2 + C p + D``.

    ``doubled_term=True`` evaluates a variant with a doubled ``3 D B_y`` in ``L1``
    and ``C A_y`` in place of ``C A_x`` in ``L2``; it exists only so tests can
    show that this variant is not invariant.
    """
    A, B, C, D = (rf(t) for t in (A, B, C, D))

    def d(f, *vs):
        for v in vs:
            f = f.diff(v)
        return f

    L1 = (
        2 * d(C, "x", "y") - d(B, "x", "x") - 3 * d(D, "y", "y")
        - 6 * D * d(A, "x") - 3 * A * d(D, "x")
        + 3 * D * d(B, "y")
        + (3 * D * d(B, "y") if doubled_term else 3 * B * d(D, "y"))
        + C * d(B, "x") - 2 * C * d(C, "y")
    )
    L2 = (
        2 * d(B, "x", "y") - d(C, "y", "y") - 3 * d(A, "x", "x")
        + 6 * A * d(D, "y") + 3 * D * d(A, "y")
        - 3 * A * d(C, "x")
        - (3 * C * d(A, "y") if doubled_term else 3 * C * d(A, "x"))
        - B * d(C, "y") + 2 * B * d(B, "x")
    )
    return LiouvilleTensor(L1, L2, corrected=not doubled_term)


def pullback_trivial_ode(X, Y):
    """``(A, B, C, D)`` of the ODE whose solutions are the curves ``Y = a X + b``.

    This is ``y'' = 0`` pulled back along ``(x, y) -> (X, Y)``; with
    ``P = (Y_x + p Y_y)/(X_x + p X_y)`` it reads ``y'' = -(P_x + p P_y)/P_p``.
    """
    X, Y = rf(X), rf(Y)
    Xx, Xy, Yx, Yy = X.diff("x"), X.diff("y"), Y.diff("x"), Y.diff("y")
    jac = Xx * Yy - Xy * Yx
    if jac.is_zero():
        raise MathRefusal("the map is not a local diffeomorphism")
    num = UniPoly([Yx, Yy])
    den = UniPoly([Xx, Xy])
    d2Y = UniPoly([Yx.diff("x"), 2 * Yx.diff("y"), Yy.diff("y")])
    d2X = UniPoly([Xx.diff("x"), 2 * Xx.diff("y"), Xy.diff("y")])
    F = (d2Y * den - num * d2X) * (-1 / jac)
    return tuple(F.coeff(n) for n in (3, 2, 1, 0))


@dataclass
class LinearizationVerdict:
    linearizable: bool
    reason: str
    ode: InterpolatingODE | None = None
    tensor: LiouvilleTensor | None = None


def degree_at_base(w: PlanarWeb) -> int:
    """Degree in ``p`` of the interpolating ODE with coefficients frozen at the base point.

    A coefficient that is nonzero at a point is a nonzero function, so this
    is a lower bound for the degree of the interpolating ODE.
    """
    es = [e(*w.base) for e in _slopes(w)]
    rs = [_along_leaves(e)(*w.base) for e in _slopes(w)]
    if len(set(es)) < len(es):
        raise MathRefusal("two foliations are tangent at the base point")
    coeffs = [mpq(0)] * len(es)
    for i, (ei, ri) in enumerate(zip(es, rs)):
        if not ri:
            continue
        term = [ri]
        for j, ej in enumerate(es):
            if j != i:
                scale = 1 / (ei - ej)
                shifted = [mpq(0)] + [c * scale for c in term]
                for n, c in enumerate(term):
                    shifted[n] -= c * ej * scale
                term = shifted
        for n, c in enumerate(term):
            coeffs[n] += c
    return max((n for n, c in enumerate(coeffs) if c), default=-1)


def is_linearizable(w: PlanarWeb) -> LinearizationVerdict:
    if w.k == 3:
        raise MathRefusal("3-webs are not supported: their linearization is a different problem")
    if w.k < 3:
        return LinearizationVerdict(True, "webs with fewer than three foliations are always linearizable")
    try:
        low = degree_at_base(w)
    except (MathRefusal, ZeroDivisionError):
        low = -1
    if low > 3:
        return LinearizationVerdict(False, f"interpolating ODE has degree at least {low} in p")
    ode = interpolating_ode(w)
    if ode.degree > 3:
        return LinearizationVerdict(False, f"interpolating ODE has degree {ode.degree} in p", ode)
    L = liouville_tensor(*ode.coefficients())
    if L.is_zero():
        return LinearizationVerdict(True, "cubic interpolating ODE with vanishing Liouville tensor", ode, L)
    return LinearizationVerdict(False, "Liouville tensor of the interpolating ODE is nonzero", ode, L)
