"""Webs dual to plane curves and Abel's addition theorem at jet level.

Lines are written ``x = a y + b``.  A line meets the curve ``F = 0`` in the
points ``(a y_i + b, y_i)`` where ``y_i(a, b)`` are the roots of
``F(a y + b, y)``; each ``y_i`` is a first integral of one foliation of the
dual web on the ``(a, b)`` plane, whose leaves are the lines through a fixed
point of the curve.  In the rest of the package the dual coordinates
``(a, b)`` are the ring variables ``x`` and ``y``.
"""

from __future__ import annotations

from contextlib import nullcontext
from dataclasses import dataclass, field

import mpmath
from gmpy2 import mpq

from .abelrank import rank_jets
from .algebra import (
    RING,
    X,
    Y,
    BivarPoly,
    RatFunc,
    UniPoly,
    eval_poly,
    poly_str,
    rational_roots,
    rf,
    to_rational,
    total_degree,
)
from .errors import MathRefusal
from .jets import Jet2, JetForm, differential, lift_root, useries_inverse, useries_mul
from .webmodel import Foliation, ImplicitWeb, PlanarWeb, _grid, discriminant_web, make_web

DIGITS = 128
TOLERANCE = mpmath.mpf(10) ** -80


@dataclass(frozen=True)
class PlaneCurve:
    F: BivarPoly

    def __init__(self, F):
        F = rf(F)
        if not F.is_polynomial():
            raise ValueError("a plane curve needs a polynomial equation")
        F = F.num
        if F.is_ground:
            raise ValueError("constant polynomial does not define a curve")
        if total_degree(F.sqf_part()) != total_degree(F):
            raise ValueError("curve equation is not squarefree")
        object.__setattr__(self, "F", F)

    @property
    def k(self) -> int:
        return total_degree(self.F)

    def __str__(self):
        return poly_str(self.F)


def _curve(C) -> PlaneCurve:
    return C if isinstance(C, PlaneCurve) else PlaneCurve(C)


# ---------------------------------------------------------------------------
# the implicit dual web


def dual_implicit(C, base=(0, 0)) -> ImplicitWeb:
    """Slope polynomial ``F(b - a p, -p)`` in the dual coordinates."""
    C = _curve(C)
    a, b = RatFunc.x(), RatFunc.y()
    p = UniPoly([0, 1])
    P = eval_poly(C.F, UniPoly([b, -a]), -p)
    if P.degree() < C.k:
        raise MathRefusal("top coefficient in p vanishes: apply a linear change of chart to the curve first")
    lead = P.lead()
    if lead.num.LC < 0:
        P = P * -1
    return ImplicitWeb(P, (to_rational(base[0]), to_rational(base[1])))


def dual_discriminant(C) -> BivarPoly:
    return discriminant_web(dual_implicit(C)).poly


def dual_web_of_lines(C) -> PlanarWeb:
    """Exact dual web of a union of distinct lines.

    A component ``alpha x + beta y + gamma`` meets ``x = a y + b`` at height
    ``-(alpha b + gamma)/(alpha a + beta)``; a horizontal component has a
    constant height, so its abscissa ``a y0 + b`` is used instead.
    """
    C = _curve(C)
    _, factors = C.F.factor_list()
    a, b = RatFunc.x(), RatFunc.y()
    fols = []
    for f, _ in factors:
        if total_degree(f) != 1:
            raise MathRefusal("the curve is not a union of lines; use the jet dual instead")
        alpha, beta, gamma = (mpq(f.coeff(m)) for m in (X, Y, RING.one))
        if alpha:
            fols.append(Foliation.first_integral(-(alpha * b + gamma) / (alpha * a + beta)))
        else:
            fols.append(Foliation.first_integral(a * (-gamma / beta) + b))
    return make_web(*fols)


# ---------------------------------------------------------------------------
# branches over a base line


def _fiber(C: PlaneCurve, a0, b0) -> list:
    """Ascending coefficients of ``F(a0 y + b0, y)``."""
    g = C.F.compose([(X, a0 * X + b0), (Y, X)])
    return _ucoeffs(g)


def _simple_rational_roots(coeffs, k):
    if len(coeffs) - 1 != k:
        return None
    roots = rational_roots(UniPoly([RatFunc(c) for c in coeffs], "y"))
    if len(roots) != k or len(set(roots)) != k:
        return None
    return roots


def find_splitting_line(C, limit: int | None = None, avoid_poles: bool = True):
    """First line ``(a, b)`` meeting the curve in ``k`` simple rational points.

    With ``avoid_poles`` the points must also lie off ``F_y = 0``.
    """
    C = _curve(C)
    Fy = C.F.diff(Y)
    grid = _grid() if limit is None else _grid()[:limit]

    def good(a0, b0):
        roots = _simple_rational_roots(_fiber(C, a0, b0), C.k)
        # skip lines through zeros of F_y, where dx / F_y has a pole
        return roots is not None and (not avoid_poles or all(Fy(a0 * r + b0, r) for r in roots))

    for a0, b0 in grid:
        if good(a0, b0):
            return (a0, b0)
    # chords through rational points; each chord's rational intersections
    # join the pool (for cubics a chord's third point is always rational)
    pts = rational_points(C, limit)
    seen = set(pts)
    tried = 0
    j = 1
    while j < len(pts) and tried < _CHORD_BUDGET:
        x2, y2 = pts[j]
        for x1, y1 in pts[:j]:
            if y1 == y2:
                continue
            tried += 1
            a0 = (x1 - x2) / (y1 - y2)
            b0 = x1 - a0 * y1
            if good(a0, b0):
                return (a0, b0)
            coeffs = _fiber(C, a0, b0)
            if len(coeffs) > 1:
                for r in rational_roots(UniPoly([RatFunc(c) for c in coeffs], "y")):
                    q = (a0 * r + b0, r)
                    if q not in seen:
                        seen.add(q)
                        pts.append(q)
        j += 1
    return None


_CHORD_BUDGET = 400


def rational_points(C, limit: int | None = None) -> list:
    """Rational points of the curve on the vertical grid lines ``x = c``."""
    C = _curve(C)
    vals = sorted({v for v, _ in (_grid() if limit is None else _grid()[:limit])}, key=lambda v: (abs(v.numerator) + v.denominator, v))
    out = []
    for c in vals:
        g = C.F.compose(X, RING(c)).compose(Y, X)
        if g and not g.is_ground:
            for r in sorted(set(rational_roots(UniPoly([RatFunc(v) for v in _ucoeffs(g)], "y")))):
                out.append((c, r))
    return out


@dataclass
class BranchSystem:
    curve: PlaneCurve
    base: tuple
    order: int
    ys: list
    numeric: bool = False
    tol: object = None

    @property
    def k(self) -> int:
        return len(self.ys)

    def xs(self) -> list:
        a = Jet2.coordinate("x", self.base, self.order) + self.base[0]
        b = Jet2.coordinate("y", self.base, self.order) + self.base[1]
        return [a * yv + b for yv in self.ys]

    def _small(self, J: Jet2) -> bool:
        if self.tol is None:
            return J.is_zero()
        return all(abs(c) <= self.tol for comp in J.comps for c in comp)

    def shock_holds(self) -> bool:
        """``d/da g = y_i d/db g`` for ``g = y_i`` and for ``g = x_i``."""
        with _precision(self.numeric):
            for yv, xv in zip(self.ys, self.xs()):
                yt = yv.with_order(self.order - 1)
                for g in (yv, xv):
                    if not self._small(g.diff("x") - yt * g.diff("y")):
                        return False
        return True

    def integrals(self) -> list:
        """``y_i``, or ``x_i`` where ``y_i`` is constant (a horizontal line component)."""
        out = []
        for yv, xv in zip(self.ys, self.xs()):
            lin = yv.comps[1] if self.order >= 1 else []
            out.append(yv if any(not self._small_value(c) for c in lin) else xv)
        return out

    def _small_value(self, c) -> bool:
        return c == 0 if self.tol is None else abs(c) <= self.tol

    def foliations(self) -> tuple:
        return tuple(Foliation.jet_integral(u, f"branch {i}") for i, u in enumerate(self.integrals()))

    def web(self) -> PlanarWeb:
        return PlanarWeb(self.foliations(), self.base)


def _precision(numeric: bool):
    return mpmath.workdps(DIGITS) if numeric else nullcontext()


def _numeric_roots(coeffs):
    with mpmath.workdps(DIGITS):
        roots = mpmath.polyroots([mpmath.mpf(int(c.numerator)) / int(c.denominator) for c in reversed(coeffs)],
                                 maxsteps=400, extraprec=4 * DIGITS)
        return [mpmath.mpc(r) for r in roots]


def branch_jets(C, base=None, order: int = 8, numeric: bool = False) -> BranchSystem:
    """Lift the ``k`` intersection points of the base line to jets in ``(a, b)``.

    Without ``base`` a line splitting the curve over the rationals is
    searched for; if none is found and ``numeric`` is set, the line
    ``(1/2, 1/3)`` is used with complex roots at high precision.
    """
    C = _curve(C)
    k = C.k
    if base is None:
        base = find_splitting_line(C) or find_splitting_line(C, avoid_poles=False)
        if base is None:
            if not numeric:
                raise MathRefusal("no base line splitting the curve over Q was found; use the numeric mode")
            base = (mpq(1, 2), mpq(1, 3))
    base = (to_rational(base[0]), to_rational(base[1]))
    coeffs = _fiber(C, *base)
    if len(coeffs) - 1 != k:
        raise MathRefusal("base line passes through a point at infinity of the curve")
    roots = _simple_rational_roots(coeffs, k)
    tol = None
    if roots is None:
        if not numeric:
            raise MathRefusal("fiber over the base line does not split into simple rational roots; use the numeric mode")
        roots = _numeric_roots(coeffs)
        tol = TOLERANCE
        for i, r in enumerate(roots):
            for s in roots[i + 1:]:
                if abs(r - s) <= tol:
                    raise MathRefusal("base line is tangent to the curve")
    a, b = RatFunc.x(), RatFunc.y()
    y = UniPoly([0, 1], "y")
    G = eval_poly(C.F, UniPoly([b, a], "y"), y)
    ys = []
    with _precision(tol is not None):
        for r in roots:
            try:
                ys.append(lift_root(G, r, base, order, tol))
            except ValueError as exc:
                raise MathRefusal(f"base line is tangent to the curve: {exc}") from None
    system = BranchSystem(C, base, order, ys, tol is not None, tol)
    with _precision(system.numeric):
        if not system.shock_holds():
            raise AssertionError("shock identities fail on the lifted branches")
    return system


# ---------------------------------------------------------------------------
# abelian differentials and traces


@dataclass(frozen=True)
class AbelianDifferential:
    """``p(x, y) dx / F_y`` on a plane curve."""

    numerator: BivarPoly

    def __str__(self):
        return f"({poly_str(self.numerator)}) dx / F_y"


def abelian_basis(C) -> list:
    C = _curve(C)
    top = C.k - 3
    return [AbelianDifferential(X**i * Y**j) for d in range(top + 1) for j in range(d + 1) for i in [d - j]]


def trace_form(C, omega, system: BranchSystem) -> JetForm:
    """``sum_i`` of the pullbacks of ``p dx / F_y`` along the branches."""
    C = _curve(C)
    p = omega.numerator if isinstance(omega, AbelianDifferential) else rf(omega).num
    Fy = C.F.diff(Y)
    total = None
    with _precision(system.numeric):
        for i, (xv, yv) in enumerate(zip(system.xs(), system.ys)):
            den = eval_poly(Fy, xv, yv)
            if (abs(den.value()) <= system.tol) if system.numeric else not den.value():
                raise MathRefusal(f"branch {i} passes through a zero of F_y")
            coef = (eval_poly(p, xv, yv) / den).with_order(system.order - 1)
            dx = differential(xv)
            form = JetForm(coef * dx.a, coef * dx.b)
            total = form if total is None else total + form
    return total


def trace_vanishes(form: JetForm, tol=None) -> bool:
    if tol is None:
        return form.is_zero()
    return all(abs(c) <= tol for J in (form.a, form.b) for comp in J.comps for c in comp)


@dataclass(frozen=True)
class MonomialTrace:
    """``coefficient * y^exponent dy``, or zero when ``coefficient`` is 0."""

    coefficient: int
    exponent: mpq

    def __str__(self):
        if not self.coefficient:
            return "0"
        e = self.exponent
        if e == 0:
            return "dy"
        if e == 1:
            return "y dy"
        return f"y^{e} dy"


def trace_monomial(m: int, n: int) -> MonomialTrace:
    """Trace of ``x^m dx`` under the ``n``-sheeted map ``x -> x^n``."""
    if n < 1:
        raise ValueError("n must be positive")
    if m < -1:
        raise ValueError("exponents below -1 are not handled")
    if (m + 1) % n:
        return MonomialTrace(0, mpq(0))
    return MonomialTrace(1, mpq(m + 1, n) - 1)


# ---------------------------------------------------------------------------
# residues on parametrized curves (the parameter is the ring variable x)


def _ucoeffs(p: BivarPoly) -> list:
    if any(j for _, j in p.keys()):
        raise ValueError("expected a polynomial in the parameter only")
    deg = max((i for i, _ in p.keys()), default=-1)
    out = [mpq(0)] * (deg + 1)
    for (i, _), c in p.terms():
        out[i] = mpq(c)
    return out


def _shift(coeffs, t0):
    """Coefficients of ``q(t0 + s)`` in ``s``."""
    out = [mpq(0)] * len(coeffs)
    for c in reversed(coeffs):
        # multiply by (t0 + s) and add c
        nxt = [mpq(0)] * len(coeffs)
        for i, v in enumerate(out[:-1]):
            nxt[i] += v * t0
            nxt[i + 1] += v
        nxt[0] += c
        out = nxt
    return out


def _order_at(coeffs, t0):
    s = _shift(coeffs, t0)
    return next((i for i, c in enumerate(s) if c), None), s


def laurent(q, t0, count: int):
    """``(v, c)`` with ``q = sum_j c_j (t - t0)^(v + j)``, ``count`` terms."""
    q = rf(q)
    t0 = to_rational(t0)
    vn, num = _order_at(_ucoeffs(q.num), t0)
    vd, den = _order_at(_ucoeffs(q.den), t0)
    if vn is None:
        return 0, [mpq(0)] * count
    num, den = num[vn:], den[vd:]
    series = useries_mul(num + [mpq(0)] * count, useries_inverse(den + [mpq(0)] * count, count), count - 1)
    return vn - vd, series[:count]


def residue(q, t0) -> mpq:
    """Coefficient of ``(t - t0)^-1`` in the Laurent expansion of ``q``."""
    v, c = laurent(q, t0, 1)
    if v > -1:
        return mpq(0)
    _, c = laurent(q, t0, -v)
    return c[-v - 1]


@dataclass
class ParamCurve:
    """``t -> (x(t), y(t))`` with singular fibers given as lists of parameters."""

    x: RatFunc
    y: RatFunc
    singular_fibers: list = field(default_factory=list)

    def __post_init__(self):
        self.x, self.y = rf(self.x), rf(self.y)
        fibers = []
        for fib in self.singular_fibers:
            fib = [to_rational(t) for t in fib]
            pts = {self.point(t) for t in fib}
            if len(pts) != 1:
                raise ValueError(f"fiber {fib} does not map to a single point")
            fibers.append(fib)
        self.singular_fibers = fibers

    def point(self, t):
        t = to_rational(t)
        return self.x(t, 0), self.y(t, 0)


def _pole_parameters(q: RatFunc):
    den = _ucoeffs(q.den)
    roots = rational_roots(UniPoly([RatFunc(c) for c in den], "t")) if len(den) > 1 else []
    distinct = sorted(set(roots))
    irrational = sum(1 for _ in roots) < len(den) - 1
    return distinct, irrational


def _collides(P: ParamCurve, t0) -> bool:
    """Whether ``t0`` is a rational self-intersection or a critical parameter."""
    try:
        x0, y0 = P.point(t0)
    except ZeroDivisionError:
        return False
    dx = P.x.diff("x")
    dy = P.y.diff("x")
    if not dx(t0, 0) and not dy(t0, 0):
        return True
    g = (P.x - x0).num.gcd((P.y - y0).num)
    roots = rational_roots(UniPoly([RatFunc(c) for c in _ucoeffs(g)], "t")) if g.degree(X) > 0 else []
    return any(r != t0 for r in roots)


def is_abelian_parametrized(P: ParamCurve, q) -> bool:
    """Whether ``q(t) dt`` is an abelian differential on the image curve.

    The form must be regular at every parameter outside the singular fibers
    (``t = oo`` included); at each fiber the residues of ``f q dt`` summed over
    the fiber must vanish for ``f = (x - x0)^i (y - y0)^j`` with ``i + j``
    up to the largest pole order there, which exhausts the local ring since
    higher monomials leave no pole.
    """
    q = rf(q)
    if q.is_zero():
        return True
    in_fibers = {t for fib in P.singular_fibers for t in fib}
    poles, irrational = _pole_parameters(q)
    if irrational:
        return False
    for t0 in poles:
        if t0 not in in_fibers:
            if _collides(P, t0):
                raise MathRefusal(f"parameter {t0} lies over a singular point but no fiber was given")
            return False
    # at infinity: q(1/s) d(1/s) = -q(1/s)/s^2 ds
    if q.num.degree(X) - q.den.degree(X) > -2:
        return False
    for fib in P.singular_fibers:
        bound = max(-laurent(q, t, 1)[0] for t in fib)
        if bound <= 0:
            continue
        x0, y0 = P.point(fib[0])
        dx, dy = P.x - x0, P.y - y0
        for d in range(bound + 1):
            for i in range(d + 1):
                f = dx**i * dy ** (d - i) * q
                if sum(residue(f, t) for t in fib):
                    return False
    return True


# ---------------------------------------------------------------------------
# rank of the dual web


def rank_dual(C, base=None, N_max: int | None = None, numeric: bool = False):
    """Jet rank of the dual web, with its ``RankReport`` marked when numeric."""
    C = _curve(C)
    k = C.k
    N_max = N_max if N_max is not None else 2 * k
    system = branch_jets(C, base, 2 * N_max + 1, numeric=numeric)
    with _precision(system.numeric):
        report, _ = rank_jets(system.web(), N_max=N_max, jets=system.integrals(), mihaileanu=False, tol=system.tol)
    report.details["numeric"] = system.numeric
    report.details["base_line"] = system.base
    return report
