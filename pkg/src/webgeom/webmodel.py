"""Planar webs given by rational data.

Conventions used throughout the package:

* A foliation is presented by a first integral ``u``, a closed 1-form
  ``a dx + b dy``, or a slope ``theta = dy/dx`` along the leaves.
* Every presentation has a defining 1-form ``A dx + B dy`` (for a slope this
  is ``-theta dx + dy``, i.e. ``dy - theta dx``).  Vertical leaves carry the
  reserved slope :data:`INFINITY` and the form ``dx``.
* ``W(u1, ..., uk)`` is the superposition of the level-set foliations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra import (
    ONE,
    ZERO,
    BivarPoly,
    RatFunc,
    UniPoly,
    discriminant,
    resultant,
    rf,
    to_rational,
)
from .errors import MathRefusal, NotClosedError
from .jets import Jet2, JetForm, expand, primitive_of_closed


class _Infinity:
    """Reserved slope value of vertical leaves."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "oo"


INFINITY = _Infinity()


@dataclass(frozen=True)
class Foliation:
    """One foliation presentation; build it with the classmethods."""

    kind: str
    data: tuple
    label: str = field(default="", compare=False)

    @classmethod
    def first_integral(cls, u, label: str = "") -> Foliation:
        return cls("first_integral", (rf(u),), label)

    @classmethod
    def closed_form(cls, a, b, label: str = "") -> Foliation:
        a, b = rf(a), rf(b)
        if a.diff("y") != b.diff("x"):
            raise NotClosedError(f"form ({a}) dx + ({b}) dy is not closed")
        if a.is_zero() and b.is_zero():
            raise MathRefusal("zero 1-form does not define a foliation")
        return cls("closed_form", (a, b), label)

    @classmethod
    def slope(cls, theta, label: str = "") -> Foliation:
        if theta is INFINITY:
            return cls("slope", (INFINITY,), label)
        return cls("slope", (rf(theta),), label)

    @classmethod
    def jet_integral(cls, u: Jet2, label: str = "") -> Foliation:
        """A first integral known only as a jet (e.g. a lifted branch)."""
        return cls("jet", (u,), label)

    def one_form(self):
        """Defining 1-form ``(A, B)`` meaning ``A dx + B dy``."""
        if self.kind == "first_integral":
            u = self.data[0]
            return u.diff("x"), u.diff("y")
        if self.kind == "closed_form":
            return self.data
        if self.kind == "slope":
            t = self.data[0]
            return (ONE, ZERO) if t is INFINITY else (-t, ONE)
        raise MathRefusal("jet-only foliation has no rational defining form")

    def slope_function(self):
        """``dy/dx`` along leaves as a RatFunc, or INFINITY for vertical leaves."""
        if self.kind == "slope":
            return self.data[0]
        A, B = self.one_form()
        if B.is_zero():
            return INFINITY
        return -A / B

    def first_integral_jet(self, base, order: int) -> Jet2:
        """A first integral vanishing at ``base``, as a jet of the given order."""
        base = (to_rational(base[0]), to_rational(base[1]))
        if self.kind == "first_integral":
            u = self.data[0]
            return expand(u - u(*base), base, order)
        if self.kind == "closed_form":
            a, b = self.data
            w = JetForm(expand(a, base, order), expand(b, base, order))
            return primitive_of_closed(w).with_order(order)
        if self.kind == "jet":
            u = self.data[0]
            if u.base != base:
                raise MathRefusal("jet first integral given at another base point")
            return (u - u.value()).with_order(order)
        t = self.data[0]
        if t is INFINITY:
            return expand(RatFunc.x() - base[0], base, order)
        return integrate_slope(t, base, order)

    def __str__(self):
        if self.kind == "first_integral":
            return str(self.data[0])
        if self.kind == "closed_form":
            return f"({self.data[0]}) dx + ({self.data[1]}) dy"
        if self.kind == "slope":
            return f"slope {self.data[0]}"
        return "jet first integral"


def _transpose(j: Jet2) -> Jet2:
    return Jet2([list(reversed(c)) for c in j.comps], (j.base[1], j.base[0]), j.order)


def _integrate_rows(theta: Jet2, order: int) -> Jet2:
    """Solve ``u_X + theta u_Y = 0`` with ``u(0, Y) = Y`` as a jet."""
    n = order
    th = [[theta.coefficient(i, j) for j in range(n + 1 - i)] for i in range(n + 1)]
    rows = [[mpq(0)] * (n + 1 - i) for i in range(n + 1)]
    if n >= 1:
        rows[0][1] = mpq(1)
    for m in range(n):
        top = n - m - 1
        s = [mpq(0)] * (top + 1)
        for k in range(m + 1):
            r = rows[m - k]
            dr = [(j + 1) * r[j + 1] for j in range(len(r) - 1)]
            tk = th[k]
            for a, ta in enumerate(tk[: top + 1]):
                if ta:
                    for b, v in enumerate(dr[: top + 1 - a]):
                        if v:
                            s[a + b] += ta * v
        rows[m + 1] = [-v / (m + 1) for v in s]
    comps = [[rows[d - j][j] for j in range(d + 1)] for d in range(n + 1)]
    return Jet2(comps, theta.base, n)


def integrate_slope(theta: RatFunc, base, order: int) -> Jet2:
    """First-integral jet of the foliation ``dy = theta dx`` at ``base``.

    The normalization is ``u = y - y0`` on the vertical line through the base
    point.  When ``theta`` has a pole at the base the roles of ``x`` and ``y``
    are swapped and ``1/theta`` is integrated instead.
    """
    base = (to_rational(base[0]), to_rational(base[1]))
    try:
        tj = expand(theta, base, order)
        return _integrate_rows(tj, order)
    except ZeroDivisionError:
        pass
    inv = 1 / theta
    swapped = (base[1], base[0])
    tj = expand(inv.compose(RatFunc.y(), RatFunc.x()), swapped, order)
    return _transpose(_integrate_rows(tj, order))


@dataclass(frozen=True)
class PlanarWeb:
    foliations: tuple
    base: tuple

    @property
    def k(self) -> int:
        return len(self.foliations)

    def __str__(self):
        return "W(" + ", ".join(str(f) for f in self.foliations) + ")"


@dataclass(frozen=True)
class ImplicitWeb:
    slope_poly: UniPoly
    base: tuple

    @property
    def k(self) -> int:
        return self.slope_poly.degree()


@dataclass
class ValidationReport:
    smooth_at_base: bool
    slopes: list
    offending_pairs: list


def _as_foliation(f) -> Foliation:
    return f if isinstance(f, Foliation) else Foliation.first_integral(f)


def _slope_at(f: Foliation, base, index: int):
    """Projective slope at ``base`` as ``(A0, B0)`` of the defining form."""
    if f.kind == "jet":
        u = f.data[0]
        return u.coefficient(1, 0), u.coefficient(0, 1)
    if f.kind == "slope":
        t = f.data[0]
        if t is INFINITY:
            return mpq(1), mpq(0)
        n = t.num.evaluate([(t.num.ring.gens[0], base[0]), (t.num.ring.gens[1], base[1])])
        d = t.den.evaluate([(t.den.ring.gens[0], base[0]), (t.den.ring.gens[1], base[1])])
        if not n and not d:
            raise MathRefusal(f"foliation {index}: slope {t} is undefined at base {_pt(base)}")
        return -mpq(n), mpq(d)
    A, B = f.one_form()
    try:
        a0, b0 = A(*base), B(*base)
    except ZeroDivisionError as e:
        raise MathRefusal(f"foliation {index}: pole at base {_pt(base)} ({e})") from None
    if not a0 and not b0:
        raise MathRefusal(f"foliation {index}: zero gradient at base {_pt(base)}")
    return a0, b0


def _pt(base):
    return f"({base[0]}, {base[1]})"


def validate(w: PlanarWeb) -> ValidationReport:
    base = w.base
    raw = [_slope_at(f, base, i) for i, f in enumerate(w.foliations)]
    slopes = [INFINITY if b == 0 else -a / b for a, b in raw]
    bad = []
    for i, j in itertools.combinations(range(len(raw)), 2):
        (a1, b1), (a2, b2) = raw[i], raw[j]
        if a1 * b2 - a2 * b1 == 0:
            bad.append((i, j))
    return ValidationReport(not bad, slopes, bad)


def _grid():
    vals = sorted(
        {mpq(p, q) for p in range(-3, 4) for q in (1, 2, 3)},
        key=lambda v: (max(abs(v.numerator), v.denominator), abs(v), v < 0),
    )
    pts = [(a, b) for a in vals for b in vals]
    pts.sort(key=lambda ab: (max(_height(ab[0]), _height(ab[1])), vals.index(ab[0]), vals.index(ab[1])))
    return pts


def _height(v):
    return max(abs(v.numerator), v.denominator)


def find_base_point(foliations) -> tuple:
    """First point of the rational search grid where the web is smooth."""
    for base in [(mpq(0), mpq(0))] + _grid():
        try:
            if validate(PlanarWeb(tuple(foliations), base)).smooth_at_base:
                return base
        except (MathRefusal, ZeroDivisionError):
            continue
    raise MathRefusal("no smooth base point on the rational search grid")


def make_web(*foliations, base=None) -> PlanarWeb:
    """Build a web from foliations or bare first integrals.

    Without ``base`` the origin is tried first and then the search grid.
    """
    fols = tuple(_as_foliation(f) for f in foliations)
    if len(fols) < 2:
        raise ValueError("a web needs at least two foliations")
    if base is None:
        base = find_base_point(fols)
    else:
        base = (to_rational(base[0]), to_rational(base[1]))
    return PlanarWeb(fols, base)


def to_slopes(w: PlanarWeb) -> list:
    return [f.slope_function() for f in w.foliations]


def implicit_from_slopes(w: PlanarWeb) -> ImplicitWeb:
    slopes = to_slopes(w)
    if any(s is INFINITY for s in slopes):
        raise MathRefusal("vertical foliation present; rotate the chart first")
    return ImplicitWeb(UniPoly.from_roots(slopes, "p"), w.base)


def tangency(w1: ImplicitWeb, w2: ImplicitWeb) -> BivarPoly:
    """Resultant in ``p`` of the two slope polynomials (numerator)."""
    r = resultant(w1.slope_poly, w2.slope_poly)
    if r.is_zero():
        raise MathRefusal("the two webs share a foliation: tangency is not a divisor")
    return r.num


@dataclass
class DiscriminantReport:
    poly: BivarPoly
    squarefree: BivarPoly


def discriminant_web(w: ImplicitWeb) -> DiscriminantReport:
    d = discriminant(w.slope_poly)
    p = d.num
    return DiscriminantReport(p, p.sqf_part() if not p.is_ground else p)


def subwebs(w: PlanarWeb, m: int) -> list:
    if not 2 <= m <= w.k:
        raise ValueError(f"subweb size must lie in [2, {w.k}]")
    return [PlanarWeb(tuple(c), w.base) for c in itertools.combinations(w.foliations, m)]


def superpose(w: PlanarWeb, *extra) -> PlanarWeb:
    return PlanarWeb(w.foliations + tuple(_as_foliation(f) for f in extra), w.base)


def pullback_foliation(f: Foliation, fx: RatFunc, fy: RatFunc) -> Foliation:
    """Pull a foliation back along ``(x, y) -> (fx, fy)``."""
    if f.kind == "first_integral":
        return Foliation.first_integral(f.data[0].compose(fx, fy), f.label)
    if f.kind == "jet":
        raise MathRefusal("cannot pull back a jet-only foliation")
    A, B = f.one_form()
    A, B = A.compose(fx, fy), B.compose(fx, fy)
    a = A * fx.diff("x") + B * fy.diff("x")
    b = A * fx.diff("y") + B * fy.diff("y")
    if f.kind == "closed_form":
        return Foliation.closed_form(a, b, f.label)
    if b.is_zero():
        return Foliation.slope(INFINITY, f.label)
    return Foliation.slope(-a / b, f.label)


def pullback(w: PlanarWeb, fx, fy, base) -> PlanarWeb:
    """``phi^* w`` for ``phi = (fx, fy)``; ``base`` is a point of the source."""
    fx, fy = rf(fx), rf(fy)
    base = (to_rational(base[0]), to_rational(base[1]))
    if (fx(*base), fy(*base)) != w.base:
        raise ValueError("base point does not map to the web's base point")
    return PlanarWeb(tuple(pullback_foliation(f, fx, fy) for f in w.foliations), base)


def chart_rotate(w: PlanarWeb, c) -> PlanarWeb:
    """Pull back along ``(x, y) -> (x + c y, y)``, which removes vertical slopes."""
    c = to_rational(c)
    x, y = RatFunc.x(), RatFunc.y()
    base = (w.base[0] - c * w.base[1], w.base[1])
    return pullback(w, x + c * y, y, base)
