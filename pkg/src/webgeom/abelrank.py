"""Abelian relations and rank.

The jet solver looks for primitives ``G_i`` (with ``G_i(0) = 0``) such that
``sum_i G_i(u_i - u_i(base))`` vanishes to a given order, ``u_i`` being first
integrals expanded at the base point.  ``g_i = G_i'`` are the relation
components: ``sum_i g_i(u_i) du_i = 0``.

Elimination runs degree by degree.  At degree ``d`` the ``k`` new unknowns
are the ``t^d`` coefficients of the ``G_i``; every older unknown is kept as a
linear combination of the free parameters that survive, so each degree costs
one small nullspace computation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from gmpy2 import mpq

from . import linalg
from .algebra import ONE, RatFunc, UniPoly, rational_roots, rf
from .castelnuovo import pi as castelnuovo_pi
from .curvature import OneForm, mihaileanu_curvature
from .errors import MathRefusal
from .jets import Jet2, JetForm, exp_jet, expand, primitive_of_closed
from .webmodel import (
    INFINITY,
    Foliation,
    PlanarWeb,
    _slope_at,
    _grid,
    find_base_point,
    superpose,
    validate,
)

_Z = mpq(0)


@dataclass
class AbelianRelationJet:
    """Components ``g_i`` as coefficient lists in powers of ``u_i - u_i(base)``."""

    g: list
    base: tuple
    order: int
    certified: bool = False

    def __str__(self):
        lines = []
        for gi in self.g:
            lines.append(" ".join(str(c) for c in gi))
        return "\n".join(lines)


@dataclass
class RankReport:
    rank_estimate: int
    stabilized: bool
    orders_tested: list
    chern_bound: int
    mihaileanu_zero: bool | None
    polynomial_certificates: int
    details: dict = field(default_factory=dict)

    def summary(self) -> str:
        state = "stabilized" if self.stabilized else "not stabilized"
        mz = "n/a" if self.mihaileanu_zero is None else str(self.mihaileanu_zero).lower()
        return f"rank: {self.rank_estimate} ({state}; chern_bound {self.chern_bound}; mihaileanu_zero {mz})"


# ---------------------------------------------------------------------------
# bounds


def _conormals(w: PlanarWeb):
    return [_slope_at(f, w.base, i) for i, f in enumerate(w.foliations)]


def ell_j(w: PlanarWeb, j: int) -> int:
    """Span dimension of the j-th powers of the conormals at the base point."""
    rows = []
    for a, b in _conormals(w):
        rows.append([comb(j, r) * a ** (j - r) * b**r for r in range(j + 1)])
    return linalg.rank(rows, j + 1)


def chern_bound(w: PlanarWeb) -> int:
    k = w.k
    return sum(max(0, k - ell_j(w, j + 1)) for j in range(k - 2))


# ---------------------------------------------------------------------------
# the jet solver


def _powers(u: Jet2, top: int):
    """``[None, u, u^2, ..., u^top]``."""
    out = [None, u]
    for _ in range(2, top + 1):
        out.append(out[-1] * u)
    return out


class _Eliminator:
    """Incremental solution space of ``sum_i G_i(u_i) = 0`` degree by degree."""

    def __init__(self, jets, tol=None):
        self.k = len(jets)
        self.order = jets[0].order
        self.pows = [_powers(u, self.order) for u in jets]
        self.tol = tol
        self.P = 0
        self.par = {}
        self.degree = 0

    def step(self):
        d = self.degree + 1
        k, P = self.k, self.P
        Pn = P + k
        for key, vec in self.par.items():
            vec.extend([_Z] * k)
        for i in range(k):
            vec = [_Z] * Pn
            vec[P + i] = mpq(1)
            self.par[(i, d)] = vec
        E = [[_Z] * Pn for _ in range(d + 1)]
        for (i, m), vec in self.par.items():
            comp = self.pows[i][m].comps[d]
            nzv = [(t, v) for t, v in enumerate(vec) if v]
            for r, c in enumerate(comp):
                if c:
                    row = E[r]
                    for t, v in nzv:
                        row[t] += c * v
        R, pivots = linalg.rref(E, Pn, self.tol)
        pivset = set(pivots)
        free = [c for c in range(Pn) if c not in pivset]
        for key, vec in self.par.items():
            new = []
            for f in free:
                s = vec[f]
                for r, p in enumerate(pivots):
                    if vec[p]:
                        s -= vec[p] * R[r][f]
                new.append(s)
            self.par[key] = new
        self.P = len(free)
        self.degree = d
        self._canonicalize()

    def _canonicalize(self):
        # keep the parametrization in reduced echelon form so entries stay small
        if not self.P:
            return
        keys = sorted(self.par)
        cols = [[self.par[key][t] for key in keys] for t in range(self.P)]
        R, _ = linalg.rref(cols, len(keys), self.tol)
        self.P = len(R)
        for idx, key in enumerate(keys):
            self.par[key] = [R[t][idx] for t in range(self.P)]

    def image(self, top: int):
        """Rows (one per unknown with ``m <= top``) of the parametrization."""
        keys = [(i, m) for i in range(self.k) for m in range(1, top + 1)]
        return keys, [self.par[key] for key in keys]

    def image_dim(self, top: int) -> int:
        _, rows = self.image(top)
        if not rows or self.P == 0:
            return 0
        return linalg.rank(rows, self.P, self.tol)

    def image_basis(self, top: int):
        keys, rows = self.image(top)
        if self.P == 0:
            return keys, []
        cols = [[rows[r][c] for r in range(len(rows))] for c in range(self.P)]
        R, _ = linalg.rref(cols, len(keys), self.tol)
        return keys, R


def web_jets(w: PlanarWeb, order: int):
    return [f.first_integral_jet(w.base, order) for f in w.foliations]


def _is_polynomial_like(gi_all, order):
    last = max((m for gi in gi_all for m, c in enumerate(gi) if c), default=-1)
    return last < order - 1


def rank_jets(
    w: PlanarWeb,
    N_max: int | None = None,
    window: int | None = None,
    *,
    jets=None,
    mihaileanu: bool = True,
    tol=None,
):
    """Jet estimate of the rank.

    ``D_N`` is the dimension of the image in order-``N`` jets of the relations
    solved to order ``2N``.  The estimate is the common value of ``D_N`` over
    ``window`` consecutive orders, the first of which is at least ``k - 2``.
    Returns ``(RankReport, basis)``.
    """
    k = w.k
    window = window or k
    N_max = N_max if N_max is not None else 4 * k
    start = max(k - 2, 0)
    target = min(N_max, start + window - 1)
    cb = chern_bound(w) if jets is None else castelnuovo_pi(2, k)
    while True:
        order = 2 * target + 1
        us = jets if jets is not None else web_jets(w, order)
        us = [(u - u.value()).with_order(order) for u in us]
        for i, u in enumerate(us):
            if u.coefficient(1, 0) == 0 and u.coefficient(0, 1) == 0 and (
                tol is None or abs(u.coefficient(1, 0)) + abs(u.coefficient(0, 1)) <= tol
            ):
                raise MathRefusal(f"foliation {i}: first integral is not a submersion at the base")
        elim = _Eliminator(us, tol)
        tested = []
        stabilized = False
        for N in range(0, target + 1):
            while elim.degree < 2 * N + 1:
                elim.step()
            tested.append((N, elim.image_dim(N + 1)))
            tail = [dn for n, dn in tested if n >= start][-window:]
            if len(tail) == window and len(set(tail)) == 1:
                stabilized = True
                break
        if stabilized or target >= N_max:
            break
        target = min(N_max, target + window)
        if jets is not None and 2 * target + 1 > jets[0].order:
            break
    N_star, estimate = tested[-1]
    keys, rows = elim.image_basis(N_star + 1)
    basis = []
    for row in rows:
        G = [[_Z] * (N_star + 2) for _ in range(k)]
        for (i, m), c in zip(keys, row):
            G[i][m] = c
        g = [[m * c for m, c in enumerate(Gi)][1:] for Gi in G]
        basis.append(AbelianRelationJet(g, w.base, N_star))
    certs = 0
    if jets is None and all(f.kind == "first_integral" for f in w.foliations):
        for rel in basis:
            if _is_polynomial_like(rel.g, N_star):
                shifted = [_shift_poly(gi, -f.data[0](*w.base)) for gi, f in zip(rel.g, w.foliations)]
                if verify_polynomial_relation(w, shifted):
                    rel.certified = True
                    certs += 1
    mz = None
    if mihaileanu and jets is None and k >= 3 and all(f.kind != "jet" for f in w.foliations):
        mz = mihaileanu_curvature(w).is_zero()
    if estimate > cb:
        raise AssertionError(f"jet rank {estimate} exceeds the Chern bound {cb}")
    if mz is False and stabilized and estimate >= cb and validate(w).smooth_at_base:
        raise AssertionError("nonzero Mihaileanu curvature with maximal jet rank")
    report = RankReport(estimate, stabilized, tested, cb, mz, certs)
    return report, basis


def _shift_poly(coeffs, c):
    """Coefficients of ``q(t) = p(t + c)`` from those of ``p``."""
    out = [_Z] * len(coeffs)
    for n, a in enumerate(coeffs):
        if a:
            for r in range(n + 1):
                out[r] += a * comb(n, r) * c ** (n - r)
    return out


def check_relation_jet(w: PlanarWeb, rel: AbelianRelationJet, order=None) -> bool:
    """Recompute ``sum g_i(u_i) du_i`` by direct composition and test it vanishes."""
    n = order if order is not None else rel.order
    us = web_jets(w, n + 1)
    total = None
    for gi, u in zip(rel.g, us):
        acc = Jet2.constant(gi[-1] if gi else _Z, w.base, n + 1)
        for c in reversed(gi[:-1]):
            acc = acc * u + c
        form = JetForm(acc * u.diff("x"), acc * u.diff("y"))
        total = form if total is None else total + form
    return total.is_zero()


# ---------------------------------------------------------------------------
# exact certificates


def _poly_at(coeffs, u: RatFunc) -> RatFunc:
    acc = RatFunc(0)
    for c in reversed(list(coeffs)):
        acc = acc * u + c
    return acc


def verify_polynomial_relation(w: PlanarWeb, polys, radicals=()) -> bool:
    """Exact test of ``sum_i p_i(f_i) df_i = 0``.

    ``f_i`` is the first integral ``u_i`` of foliation ``i``, except for the
    indices listed in ``radicals`` where ``f_i = sqrt(u_i)``.  For those the
    polynomial ``p_i`` must be odd, so that ``p_i(f) df = p_i(f)/(2f) du`` is
    rational in ``u_i``.
    """
    a = RatFunc(0)
    b = RatFunc(0)
    for i, (f, p) in enumerate(zip(w.foliations, polys)):
        if f.kind != "first_integral":
            raise MathRefusal(f"foliation {i}: rational first integral required")
        u = f.data[0]
        p = [mpq(c) if not isinstance(c, RatFunc) else c for c in p]
        if i in radicals:
            if any(c for n, c in enumerate(p) if n % 2 == 0):
                raise MathRefusal(f"foliation {i}: even-degree terms of a radical integral are not rational")
            # p(f)/(2f) with f^2 = u
            q = [p[n] / 2 for n in range(1, len(p), 2)]
            coef = _poly_at(q, u)
        else:
            coef = _poly_at(p, u)
        a = a + coef * u.diff("x")
        b = b + coef * u.diff("y")
    return a.is_zero() and b.is_zero()


def functional_to_differential(G):
    """``G_i`` coefficient lists (functional equation) to ``g_i = G_i'``."""
    return [[n * mpq(c) for n, c in enumerate(Gi)][1:] for Gi in G]


# ---------------------------------------------------------------------------
# Abel's method for quasi-parallel webs


@dataclass
class AbelReduction:
    ode_order: int
    maximal: bool
    steps: int


def abel_quasi_parallel(linear_integrals, u) -> AbelReduction:
    """Order of the linear ODE satisfied by ``g`` in ``sum g_i(l_i) + g(u) = 0``."""
    forms = [rf(l) for l in linear_integrals]
    u = rf(u)
    coeffs = []
    for l in forms:
        if not l.is_polynomial() or l.num.is_ground or any(i + j != 1 for i, j in l.num.keys()):
            raise MathRefusal(f"{l} is not a linear form")
        coeffs.append((l.diff("x").constant(), l.diff("y").constant()))
    for (a1, b1), (a2, b2) in itertools.combinations(coeffs, 2):
        if a1 * b2 - a2 * b1 == 0:
            raise MathRefusal("linear forms are not pairwise independent")
    if u.is_polynomial() and all(i + j <= 1 for i, j in u.num.keys()):
        raise MathRefusal("u is affine; the web is parallel, not quasi-parallel")
    ux, uy = u.diff("x"), u.diff("y")

    def apply(vx, vy, f):
        return vx * f.diff("x") + vy * f.diff("y")

    # g^{(j)}(u) coefficients
    f = [ONE]
    for a, b in coeffs:
        vx, vy = RatFunc(b), RatFunc(-a)
        vu = apply(vx, vy, u)
        if vu.is_zero():
            raise MathRefusal("u is not transverse to one of the linear foliations")
        new = [RatFunc(0)] * (len(f) + 1)
        for j, c in enumerate(f):
            new[j] = new[j] + apply(vx, vy, c)
            new[j + 1] = new[j + 1] + c * vu
        f = new
    ell = len(f) - 1
    h = [c / f[ell] for c in f[:ell]]
    steps = 0
    for steps in range(1, len(coeffs) + 2):
        red = [apply(uy, -ux, c) for c in h]
        if all(c.is_zero() for c in red):
            return AbelReduction(ell, ell == len(coeffs), steps - 1)
        ell = max(j for j, c in enumerate(red) if not c.is_zero())
        h = [c / red[ell] for c in red[:ell]]
        if ell == 0:
            return AbelReduction(0, False, steps)
    raise MathRefusal("reduction did not terminate: input is not quasi-parallel")


# ---------------------------------------------------------------------------
# infinitesimal automorphisms


def _vector(v):
    return rf(v[0]), rf(v[1])


def is_infinitesimal_automorphism(w: PlanarWeb, v) -> bool:
    P, Q = _vector(v)
    for f in w.foliations:
        A, B = f.one_form()
        curl = B.diff("x") - A.diff("y")
        ivw = A * P + B * Q
        L1 = -Q * curl + ivw.diff("x")
        L2 = P * curl + ivw.diff("y")
        if not (L1 * B - L2 * A).is_zero():
            return False
    return True


def canonical_forms(w: PlanarWeb, v) -> list:
    """Closed forms ``du_i = w_i / (i_v w_i)`` with ``<du_i, v> = 1``."""
    P, Q = _vector(v)
    out = []
    for i, f in enumerate(w.foliations):
        A, B = f.one_form()
        ivw = A * P + B * Q
        if ivw.is_zero():
            raise MathRefusal(f"v is tangent to foliation {i}")
        try:
            at_base = ivw(*w.base)
        except ZeroDivisionError:
            at_base = 0
        if not at_base:
            raise MathRefusal(f"v is tangent to foliation {i} at the base point")
        form = OneForm(A / ivw, B / ivw)
        if not form.d().is_zero():
            raise AssertionError(f"canonical form of foliation {i} is not closed")
        out.append(form)
    return out


@dataclass
class EigenPolynomial:
    poly: UniPoly
    candidates: list
    multiplicities: dict


def _det(M):
    n = len(M)
    A = [list(r) for r in M]
    det = ONE
    for c in range(n):
        p = next((r for r in range(c, n) if not A[r][c].is_zero()), None)
        if p is None:
            return RatFunc(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det = det * A[c][c]
        inv = 1 / A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] * inv
            if not f.is_zero():
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


def _interpolate(nodes, values, var):
    """Newton interpolation with RatFunc values at rational nodes."""
    n = len(nodes)
    coef = list(values)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - j])
    poly = UniPoly([coef[-1]], var)
    for i in range(n - 2, -1, -1):
        poly = poly * UniPoly([-nodes[i], 1], var) + coef[i]
    return poly


def _upoly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        r = list(a)
        while len(r) >= len(b) and r:
            f = r[-1] / b[-1]
            s = len(r) - len(b)
            for i, c in enumerate(b):
                r[s + i] -= f * c
            r = _trim(r)
        a, b = b, r
    return [c / a[-1] for c in a] if a else a


def _trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def constant_roots(P: UniPoly):
    """Rational numbers ``r`` with ``P(r)`` identically zero, with multiplicity."""
    den = ONE
    for c in P.coeffs:
        den = den * RatFunc(c.den) / RatFunc(den.num.gcd(c.den)) if not c.is_polynomial() else den
    nums = [(c * den).num for c in P.coeffs]
    monos = set()
    for p in nums:
        monos.update(p.keys())
    g = None
    for mono in sorted(monos):
        q = [mpq(p.get(mono, 0)) for p in nums]
        g = _trim(q) if g is None else _upoly_gcd(g, q)
    if not g or len(g) == 1:
        return {}
    mult = {}
    for r in rational_roots(UniPoly(g, P.var)):
        mult[r] = mult.get(r, 0) + 1
    return mult


def eigen_polynomial(w: PlanarWeb, v, witness=None) -> EigenPolynomial:
    """Wronskian polynomial in ``lam`` of the formal exponentials ``e^(lam u_i)``.

    ``witness`` is a vector field ``(w_x, w_y)``; by default ``x d/dx - y d/dy``.
    Rows are ``w^j`` applied to the exponentials, i.e. ``Q_j(lam) e^(lam u_i)``
    with ``Q_0 = 1`` and ``Q_(j+1) = lam w(u_i) Q_j + w(Q_j)``.  The determinant
    carries a factor ``lam^(k-1)``, which is removed.
    """
    x, y = RatFunc.x(), RatFunc.y()
    wx, wy = _vector(witness if witness is not None else (x, -y))
    forms = canonical_forms(w, v)
    k = w.k
    lam = UniPoly([0, 1], "lam")

    def wder(f):
        return wx * f.diff("x") + wy * f.diff("y")

    cols = []
    for form in forms:
        wu = form.a * wx + form.b * wy
        Q = UniPoly([1], "lam")
        col = [Q]
        for _ in range(k - 1):
            Q = lam * Q * wu + Q.map(wder)
            col.append(Q)
        cols.append(col)
    top = k * (k - 1) // 2
    nodes = [mpq(n) for n in range(top + 1)]
    values = [_det([[cols[i][j](RatFunc(t)) for i in range(k)] for j in range(k)]) for t in nodes]
    full = _interpolate(nodes, values, "lam")
    low = full.coeffs[: k - 1]
    if any(not c.is_zero() for c in low):
        raise AssertionError("Wronskian is not divisible by lam^(k-1)")
    poly = UniPoly(full.coeffs[k - 1 :], "lam")
    mult = constant_roots(poly)
    cands = sorted(set(mult) | {mpq(0)})
    return EigenPolynomial(poly, cands, mult)


def orbit_foliation(v) -> Foliation:
    P, Q = _vector(v)
    if P.is_zero():
        return Foliation.slope(INFINITY, "orbits")
    return Foliation.slope(Q / P, "orbits")


def _eigen_relations(jets_u, forms_j, lam, degree_count, order):
    """Dimension of relations ``sum_i P_i(u_i) e^(lam u_i) du_i`` with ``deg P_i < degree_count``."""
    cols = []
    for U, (a, b) in zip(jets_u, forms_j):
        E = exp_jet(U * lam) if lam else Jet2.constant(mpq(1), U.base, U.order)
        power = Jet2.constant(mpq(1), U.base, U.order)
        for _ in range(degree_count):
            f = power * E
            cols.append(JetForm(f * a, f * b))
            power = power * U
    nrows_terms = []
    for form in cols:
        vec = []
        for comp in (form.a, form.b):
            for d in range(order + 1):
                vec.extend(comp.comps[d])
        nrows_terms.append(vec)
    ncols = len(cols)
    rows = [[nrows_terms[c][r] for c in range(ncols)] for r in range(len(nrows_terms[0]))]
    return linalg.nullspace(rows, ncols)


def _transverse_base(w: PlanarWeb, v) -> PlanarWeb:
    """``w`` itself, or ``w`` moved to a smooth grid point where ``v`` is transverse."""
    for base in [w.base] + _grid():
        cand = PlanarWeb(w.foliations, base)
        try:
            if base != w.base and not validate(cand).smooth_at_base:
                continue
            canonical_forms(cand, v)
        except (MathRefusal, ZeroDivisionError):
            continue
        return cand
    raise MathRefusal("no grid point where the vector field is transverse to the web")


def rank_with_automorphism(w: PlanarWeb, v, order: int | None = None, check_superposition: bool = True):
    """Rank through the eigen-decomposition given by a transverse automorphism."""
    if not is_infinitesimal_automorphism(w, v):
        raise MathRefusal("vector field is not an infinitesimal automorphism of the web")
    k = w.k
    n = order or 4 * k
    w = _transverse_base(w, v)
    forms = canonical_forms(w, v)
    forms_j = [(expand(f.a, w.base, n), expand(f.b, w.base, n)) for f in forms]
    jets_u = [primitive_of_closed(JetForm(a, b)).with_order(n) for a, b in forms_j]
    x, y = RatFunc.x(), RatFunc.y()
    e1 = eigen_polynomial(w, v, (x, -y))
    e2 = eigen_polynomial(w, v, (RatFunc(1), RatFunc(2)))
    cands = sorted(set(e1.candidates) & set(e2.candidates))
    dims = {}
    relations = {}
    for lam in cands:
        m = min(e1.multiplicities.get(lam, 0), e2.multiplicities.get(lam, 0))
        count = max(m, 1) if lam else max(m, 1, (k - 1) * (k - 2) // 2)
        basis = _eigen_relations(jets_u, forms_j, lam, count, n - 1)
        if basis:
            dims[lam] = len(basis)
            relations[lam] = basis
    total = sum(dims.values())
    details = {"eigen_dimensions": dims, "relations": relations, "candidates": cands}
    if check_superposition:
        fv = orbit_foliation(v)
        sup = superpose(w, fv)
        try:
            ok = validate(sup).smooth_at_base
        except MathRefusal:
            ok = False
        if not ok:
            sup = PlanarWeb(sup.foliations, find_base_point(sup.foliations))
        rep, _ = rank_jets(sup, mihaileanu=False)
        details["superposed_rank"] = rep.rank_estimate
        details["superposition_identity"] = rep.rank_estimate == total + k - 1
    report = RankReport(total, True, [n], chern_bound(w), None, 0, details)
    return report
