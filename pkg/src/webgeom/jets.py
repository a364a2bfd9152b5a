"""Truncated bivariate power series at a rational base point.

A :class:`Jet2` of order ``N`` stores its homogeneous components densely:
``comps[d][j]`` is the coefficient of ``X^(d-j) Y^j`` where ``X = x - x0``
and ``Y = y - y0``.  Coefficients are exact ``mpq`` values except in the
numeric fallback of the dual-web module, which feeds ``mpc`` values through
the same code.  Mixed-order arithmetic truncates to the smaller order.

Univariate truncated series are plain coefficient lists; helpers for them
live at the bottom of the module.
"""

from __future__ import annotations

from math import comb

from gmpy2 import mpq

from .algebra import RING, UniPoly, poly_str, rf, to_rational

_Z = mpq(0)


def _hconv(a, b):
    """Product of two homogeneous components."""
    out = [_Z] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _nonzero_degrees(comps):
    return [d for d, c in enumerate(comps) if any(c)]


class Jet2:
    __slots__ = ("base", "order", "comps")

    def __init__(self, comps, base, order: int):
        if len(comps) != order + 1:
            raise ValueError("component count does not match order")
        self.comps = comps
        self.base = base
        self.order = order

    # constructors
    @classmethod
    def zero(cls, base, order: int) -> Jet2:
        return cls([[_Z] * (d + 1) for d in range(order + 1)], base, order)

    @classmethod
    def constant(cls, c, base, order: int) -> Jet2:
        j = cls.zero(base, order)
        j.comps[0][0] = c
        return j

    @classmethod
    def coordinate(cls, var: str, base, order: int) -> Jet2:
        """The shifted coordinate ``x - x0`` or ``y - y0``."""
        j = cls.zero(base, order)
        if order >= 1:
            j.comps[1][0 if var == "x" else 1] = mpq(1)
        return j

    @classmethod
    def from_terms(cls, terms: dict, base, order: int) -> Jet2:
        j = cls.zero(base, order)
        for (i, k), c in terms.items():
            if i + k <= order:
                j.comps[i + k][k] += c
        return j

    # access
    def coefficient(self, i: int, j: int):
        d = i + j
        return self.comps[d][j] if d <= self.order else _Z

    def terms(self) -> dict:
        return {(d - j, j): c for d, comp in enumerate(self.comps) for j, c in enumerate(comp) if c}

    def value(self):
        return self.comps[0][0]

    def is_zero(self) -> bool:
        return not any(any(c) for c in self.comps)

    def lowest_degree(self):
        for d, c in enumerate(self.comps):
            if any(c):
                return d
        return None

    def with_order(self, order: int) -> Jet2:
        """Truncate, or pad with zero components."""
        comps = [list(c) for c in self.comps[: order + 1]]
        comps += [[_Z] * (d + 1) for d in range(len(comps), order + 1)]
        return Jet2(comps, self.base, order)

    def map(self, fn) -> Jet2:
        return Jet2([[fn(c) for c in comp] for comp in self.comps], self.base, self.order)

    def _check(self, other):
        if isinstance(other, Jet2):
            if other.base != self.base:
                raise ValueError("jets at different base points")
            return other
        return None

    # arithmetic
    def __add__(self, other):
        o = self._check(other)
        if o is None:
            out = self.with_order(self.order)
            out.comps[0][0] = out.comps[0][0] + other
            return out
        n = min(self.order, o.order)
        return Jet2(
            [[a + b for a, b in zip(self.comps[d], o.comps[d])] for d in range(n + 1)],
            self.base,
            n,
        )

    __radd__ = __add__

    def __neg__(self):
        return self.map(lambda c: -c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._check(other)
        if o is None:
            return self.map(lambda c: c * other)
        n = min(self.order, o.order)
        out = [[_Z] * (d + 1) for d in range(n + 1)]
        da = _nonzero_degrees(self.comps[: n + 1])
        db = _nonzero_degrees(o.comps[: n + 1])
        for d1 in da:
            a = self.comps[d1]
            for d2 in db:
                if d1 + d2 > n:
                    break
                target = out[d1 + d2]
                for k, v in enumerate(_hconv(a, o.comps[d2])):
                    if v:
                        target[k] += v
        return Jet2(out, self.base, n)

    __rmul__ = __mul__

    def inverse(self) -> Jet2:
        a0 = self.comps[0][0]
        if not a0:
            raise ZeroDivisionError("jet with zero constant term is not invertible")
        inv0 = mpq(1) / a0
        n = self.order
        out = [[inv0]]
        for d in range(1, n + 1):
            acc = [_Z] * (d + 1)
            for e in range(1, d + 1):
                if any(self.comps[e]) and any(out[d - e]):
                    for k, v in enumerate(_hconv(self.comps[e], out[d - e])):
                        acc[k] += v
            out.append([-inv0 * v for v in acc])
        return Jet2(out, self.base, n)

    def __truediv__(self, other):
        o = self._check(other)
        if o is None:
            return self.map(lambda c: c / other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = Jet2.constant(mpq(1), self.base, self.order)
        sq = self
        while e:
            if e & 1:
                out = out * sq
            e >>= 1
            if e:
                sq = sq * sq
        return out

    def __eq__(self, other):
        o = self._check(other) if isinstance(other, Jet2) else None
        if o is None:
            return False
        n = min(self.order, o.order)
        return all(self.comps[d] == o.comps[d] for d in range(n + 1))

    __hash__ = None

    def diff(self, var: str) -> Jet2:
        """Partial derivative; the order drops by one."""
        n = self.order
        if n == 0:
            return Jet2([[_Z]], self.base, 0)
        out = []
        for d in range(1, n + 1):
            c = self.comps[d]
            if var == "x":
                out.append([(d - j) * c[j] for j in range(d)])
            else:
                out.append([j * c[j] for j in range(1, d + 1)])
        return Jet2(out, self.base, n - 1)

    def euler(self) -> Jet2:
        """``X d/dX + Y d/dY``: scales the degree-d component by d."""
        return Jet2([[d * c for c in comp] for d, comp in enumerate(self.comps)], self.base, self.order)

    def __repr__(self):
        return f"Jet2(base={tuple(str(b) for b in self.base)}, order={self.order}, {self})"

    def __str__(self):
        t = self.terms()
        if not t:
            return "0"
        poly = RING.zero
        for (i, j), c in t.items():
            poly = poly + RING({(i, j): c})
        return poly_str(poly)


class JetForm:
    """The 1-form ``a dx + b dy`` with jet coefficients."""

    __slots__ = ("a", "b")

    def __init__(self, a: Jet2, b: Jet2):
        if a.base != b.base:
            raise ValueError("components at different base points")
        n = min(a.order, b.order)
        self.a = a.with_order(n) if a.order != n else a
        self.b = b.with_order(n) if b.order != n else b

    @property
    def order(self) -> int:
        return self.a.order

    @property
    def base(self):
        return self.a.base

    def __add__(self, other: JetForm) -> JetForm:
        return JetForm(self.a + other.a, self.b + other.b)

    def __sub__(self, other: JetForm) -> JetForm:
        return JetForm(self.a - other.a, self.b - other.b)

    def __mul__(self, f) -> JetForm:
        return JetForm(self.a * f, self.b * f)

    __rmul__ = __mul__

    def d(self) -> Jet2:
        """Coefficient of ``dx^dy`` in the exterior derivative."""
        return self.b.diff("x") - self.a.diff("y")

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()


def differential(f: Jet2) -> JetForm:
    return JetForm(f.diff("x"), f.diff("y"))


def expand_poly(p, base, order: int) -> Jet2:
    """Taylor expansion of a polynomial at ``base`` (exact binomial shift)."""
    x0, y0 = base
    j = Jet2.zero(base, order)
    pow_x = {}
    pow_y = {}
    for (i, k), c in p.items():
        c = mpq(c)
        for a in range(min(i, order) + 1):
            ca = c * comb(i, a)
            if i - a:
                ca *= pow_x.setdefault(i - a, x0 ** (i - a))
            if not ca:
                continue
            for b in range(min(k, order - a) + 1):
                cb = ca * comb(k, b)
                if k - b:
                    cb *= pow_y.setdefault(k - b, y0 ** (k - b))
                if cb:
                    j.comps[a + b][b] += cb
    return j


def expand(f, base, order: int) -> Jet2:
    """Exact Taylor expansion of a RatFunc at a rational base point."""
    f = rf(f)
    base = (to_rational(base[0]), to_rational(base[1]))
    num = expand_poly(f.num, base, order)
    if f.den == RING.one:
        return num
    den = expand_poly(f.den, base, order)
    if not den.value():
        raise ZeroDivisionError(
            f"denominator {poly_str(f.den)} vanishes at base ({base[0]}, {base[1]})"
        )
    return num * den.inverse()


def _require_no_constant(u: Jet2, what: str):
    if u.value():
        raise ValueError(f"{what} needs a jet with zero constant term, got {u.value()}")


def compose_uni(g, u: Jet2) -> Jet2:
    """``g(u)`` for a coefficient sequence ``g`` (``g[n]`` multiplies ``t^n``)."""
    _require_no_constant(u, "compose_uni")
    g = list(g)
    if len(g) - 1 > u.order:
        g = g[: u.order + 1]
    acc = Jet2.constant(g[-1] if g else _Z, u.base, u.order)
    for c in reversed(g[:-1]):
        acc = acc * u + c
    return acc


def exp_jet(u: Jet2) -> Jet2:
    """``exp(u)`` via the Euler-operator recursion ``d E_d = sum e u_e E_(d-e)``."""
    _require_no_constant(u, "exp_jet")
    n = u.order
    out = [[mpq(1)]]
    for d in range(1, n + 1):
        acc = [_Z] * (d + 1)
        for e in range(1, d + 1):
            if any(u.comps[e]) and any(out[d - e]):
                for k, v in enumerate(_hconv(u.comps[e], out[d - e])):
                    acc[k] += e * v
        out.append([v / d for v in acc])
    return Jet2(out, u.base, n)


def log1p_jet(u: Jet2) -> Jet2:
    """``log(1 + u)`` via ``d L_d = d u_d - sum_(e<d) e L_e u_(d-e)``."""
    _require_no_constant(u, "log1p_jet")
    n = u.order
    out = [[_Z]]
    for d in range(1, n + 1):
        acc = [d * c for c in u.comps[d]]
        for e in range(1, d):
            if any(out[e]) and any(u.comps[d - e]):
                for k, v in enumerate(_hconv(out[e], u.comps[d - e])):
                    acc[k] -= e * v
        out.append([v / d for v in acc])
    return Jet2(out, u.base, n)


def primitive_of_closed(w: JetForm) -> Jet2:
    """Primitive ``P`` with ``P(base) = 0`` and ``dP = w`` through order ``w.order``.

    The result has order ``w.order + 1``.  Closedness is checked coefficient
    by coefficient first.
    """
    n = w.order
    a, b = w.a, w.b
    for d in range(n):
        for j in range(d + 1):
            i = d - j
            # coefficient of X^i Y^j in a_y - b_x
            lhs = (j + 1) * a.comps[d + 1][j + 1]
            rhs = (i + 1) * b.comps[d + 1][j]
            if lhs != rhs:
                raise ValueError(
                    f"form is not closed: d/dy of dx-part and d/dx of dy-part differ "
                    f"at coefficient of (x-x0)^{i}(y-y0)^{j}: {lhs} != {rhs}"
                )
    out = [[_Z]]
    for d in range(1, n + 2):
        comp = [_Z] * (d + 1)
        for j in range(d + 1):
            i = d - j
            if i >= 1:
                comp[j] = a.comps[d - 1][j] / i
            else:
                comp[j] = b.comps[d - 1][j - 1] / j
        out.append(comp)
    return Jet2(out, a.base, n + 1)


def eval_unipoly_jets(coeff_jets, y: Jet2) -> Jet2:
    acc = coeff_jets[-1].with_order(y.order)
    for c in reversed(coeff_jets[:-1]):
        acc = acc * y + c
    return acc


def lift_root(G: UniPoly, seed, base, order: int, tol=None) -> Jet2:
    """Jet ``Y`` with ``Y(base) = seed`` and ``G(Y) = 0`` through ``order``.

    ``G`` is a polynomial in its indeterminate whose coefficients are
    rational functions of the two base coordinates.  Newton steps roughly
    double the correct order each time.  With ``tol`` set the seed may be
    an inexact (complex) number and the root tests become tolerance tests.
    """
    base = (to_rational(base[0]), to_rational(base[1]))
    cj = [expand(c, base, order) for c in G.coeffs]
    dj = [c * k for k, c in enumerate(cj)][1:]
    if not dj:
        raise ValueError("polynomial of degree 0 has no roots")
    g0 = sum(c.value() * seed**k for k, c in enumerate(cj))
    d0 = sum(c.value() * seed**k for k, c in enumerate(dj))
    small = (lambda v: v == 0) if tol is None else (lambda v: abs(v) <= tol)
    if not small(g0):
        raise ValueError(f"seed {seed} is not a root: residual {g0}")
    if small(d0):
        raise ValueError(f"seed {seed} is a multiple root")
    Y = Jet2.constant(seed, base, 0)
    cur = 0
    while cur < order:
        cur = min(2 * cur + 1, order)
        Y = Y.with_order(cur)
        gv = eval_unipoly_jets([c.with_order(cur) for c in cj], Y)
        dv = eval_unipoly_jets([c.with_order(cur) for c in dj], Y)
        Y = Y - gv / dv
    return Y.with_order(order)


# ---------------------------------------------------------------------------
# univariate truncated series: coefficient lists of length N + 1


def useries_mul(a, b, n: int):
    out = [_Z] * (n + 1)
    for i, ai in enumerate(a[: n + 1]):
        if ai:
            for j, bj in enumerate(b[: n + 1 - i]):
                out[i + j] += ai * bj
    return out


def useries_inverse(a, n: int):
    if not a[0]:
        raise ZeroDivisionError("series with zero constant term")
    inv0 = mpq(1) / a[0]
    out = [inv0] + [_Z] * n
    for d in range(1, n + 1):
        acc = _Z
        for e in range(1, min(d, len(a) - 1) + 1):
            acc += a[e] * out[d - e]
        out[d] = -inv0 * acc
    return out


def useries_compose(f, g, n: int):
    """``f(g(s))`` truncated at ``s^n``; ``g`` must have zero constant term."""
    if g and g[0]:
        raise ValueError("inner series must have zero constant term")
    acc = [_Z] * (n + 1)
    for c in reversed(list(f[: n + 1])):
        acc = useries_mul(acc, g, n)
        acc[0] += c
    return acc


def useries_reversion(f, n: int):
    """Compositional inverse of ``f`` with ``f(0) = 0``, ``f'(0) != 0``."""
    if f[0]:
        raise ValueError("series must vanish at 0")
    if len(f) < 2 or not f[1]:
        raise ValueError("series is not invertible: zero linear term")
    g = [_Z, mpq(1) / f[1]] + [_Z] * (n - 1)
    for k in range(2, n + 1):
        comp = useries_compose(f, g, k)
        g[k] -= comp[k] / f[1]
    return g[: n + 1]


def jet_substitute(J: Jet2, sx, sy, n: int):
    """Univariate series ``J(sx(s), sy(s))`` for series without constant terms."""
    xs = [[mpq(1)] + [_Z] * n]
    ys = [[mpq(1)] + [_Z] * n]
    for _ in range(J.order):
        xs.append(useries_mul(xs[-1], sx, n))
        ys.append(useries_mul(ys[-1], sy, n))
    out = [_Z] * (n + 1)
    for d, comp in enumerate(J.comps):
        for j, c in enumerate(comp):
            if c:
                term = useries_mul(xs[d - j], ys[j], n)
                for k, v in enumerate(term):
                    out[k] += c * v
    return out
