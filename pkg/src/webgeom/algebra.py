"""Exact arithmetic over the rationals.

Scalars are ``gmpy2.mpq``.  Bivariate polynomials in ``x, y`` are sparse
polynomials of a fixed ``QQ[x, y]`` ring ordered graded-lexicographically
with ``x > y``.  :class:`RatFunc` is a reduced quotient of two of them and
:class:`UniPoly` is a polynomial in an auxiliary indeterminate (``p``,
``lam`` or ``t``) whose coefficients are :class:`RatFunc` values.

Every value is immutable once built.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from gmpy2 import mpq, mpz
from sympy import divisors
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring

Rational = mpq

RING, X, Y = ring("x,y", QQ, grlex)
BivarPoly = type(X)

_VARS = ("x", "y")


def to_rational(value) -> mpq:
    """Coerce an int, Fraction, mpq or ``"a/b"`` string to ``mpq``."""
    if isinstance(value, str):
        return mpq(Fraction(value.strip()))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def poly_from_terms(terms: dict) -> BivarPoly:
    """Build a polynomial from ``{(i, j): coefficient}``; zero entries are dropped."""
    p = RING.zero
    for (i, j), c in terms.items():
        c = to_rational(c)
        if c:
            p = p + RING({(i, j): c})
    return p


def poly_terms(p: BivarPoly) -> dict:
    return {m: mpq(c) for m, c in p.items()}


def _coeff_str(c: mpq) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _monomial_str(m) -> str:
    parts = []
    for name, e in zip(_VARS, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_terms(terms) -> str:
    """Join ``(coefficient, monomial string)`` pairs as ``c*m`` with signed separators."""
    out = []
    for c, mono in terms:
        c = mpq(c)
        if not c:
            continue
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _coeff_str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_coeff_str(a)}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) or "0"


def poly_str(p: BivarPoly) -> str:
    """Canonical rendering: grlex-descending terms, ``^`` exponents."""
    return format_terms((c, _monomial_str(m)) for m, c in p.terms())


def _content(p: BivarPoly) -> mpq:
    """Positive rational c making ``p / c`` primitive with integer coefficients."""
    cs = [mpq(c) for c in p.values()]
    den = reduce(lcm, (int(c.denominator) for c in cs), 1)
    num = reduce(gcd, (int(c.numerator) for c in cs), 0)
    return mpq(num, den)


def _normalize(num: BivarPoly, den: BivarPoly):
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return RING.zero, RING.one
    if not den.is_ground:
        _, num, den = num.cofactors(den)
    if den.is_ground:
        return num * (1 / mpq(den.LC)), RING.one
    c = _content(den)
    if den.LC < 0:
        c = -c
    if c != 1:
        inv = 1 / c
        num = num * inv
        den = den * inv
    return num, den


class RatFunc:
    """Reduced quotient ``num/den`` of bivariate polynomials over QQ.

    ``den`` is a primitive integer polynomial with positive grlex leading
    coefficient, so equal functions have equal representations.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        num = _as_poly(num)
        den = RING.one if den is None else _as_poly(den)
        self.num, self.den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    @classmethod
    def x(cls) -> RatFunc:
        return cls._raw(X, RING.one)

    @classmethod
    def y(cls) -> RatFunc:
        return cls._raw(Y, RING.one)

    # predicates
    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den == RING.one

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den == RING.one

    def constant(self) -> mpq:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return mpq(self.num.LC) if self.num else mpq(0)

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            if self.den == RING.one:
                return RatFunc._raw(self.num + other.num, RING.one)
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den == RING.one and other.den == RING.one:
            return RatFunc._raw(self.num * other.num, RING.one)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return RatFunc(self.den**-e, self.num**-e)
        return RatFunc._raw(self.num**e, self.den**e)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den == RING.one:
            return poly_str(self.num)
        return f"({poly_str(self.num)})/({poly_str(self.den)})"

    # calculus and evaluation
    def diff(self, var: str) -> RatFunc:
        v = _var(var)
        if self.den == RING.one:
            return RatFunc._raw(self.num.diff(v), RING.one)
        return RatFunc(self.num.diff(v) * self.den - self.num * self.den.diff(v), self.den**2)

    def __call__(self, x, y) -> mpq:
        x, y = to_rational(x), to_rational(y)
        d = self.den.evaluate([(X, x), (Y, y)])
        if not d:
            raise ZeroDivisionError(f"denominator {poly_str(self.den)} vanishes at ({x}, {y})")
        return mpq(self.num.evaluate([(X, x), (Y, y)])) / mpq(d)

    def compose(self, fx: RatFunc, fy: RatFunc) -> RatFunc:
        """Substitute ``x -> fx``, ``y -> fy``."""
        return eval_poly(self.num, fx, fy) / eval_poly(self.den, fx, fy)

    def degree(self) -> int:
        """Total degree of numerator minus that of the denominator."""
        return total_degree(self.num) - total_degree(self.den)


def total_degree(p: BivarPoly) -> int:
    return max((i + j for i, j in p.keys()), default=-1)


def eval_poly(p: BivarPoly, fx, fy):
    """Evaluate ``p`` at ring-like values (RatFunc, jets, floats)."""
    px, py = {}, {}

    def pw(cache, base, e):
        if e not in cache:
            cache[e] = base if e == 1 else base**e
        return cache[e]

    total = fx * 0
    for (i, j), c in p.items():
        m = pw(px, fx, i) if i else None
        if j:
            m = pw(py, fy, j) if m is None else m * pw(py, fy, j)
        total = total + (mpq(c) if m is None else m * mpq(c))
    return total


def _var(var):
    if var == "x" or var is X:
        return X
    if var == "y" or var is Y:
        return Y
    raise ValueError(f"unknown variable {var!r}")


def _as_poly(v) -> BivarPoly:
    if isinstance(v, BivarPoly):
        return v
    if isinstance(v, RatFunc):
        if v.den != RING.one:
            raise TypeError("expected a polynomial")
        return v.num
    return RING(to_rational(v))


def _coerce(v):
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, BivarPoly):
        return RatFunc._raw(v, RING.one)
    if isinstance(v, (int, Fraction, type(mpq(0)), type(mpz(0)))):
        return RatFunc._raw(RING(to_rational(v)), RING.one)
    return NotImplemented


def rf(v) -> RatFunc:
    """Coerce to RatFunc."""
    out = _coerce(v)
    if out is NotImplemented:
        raise TypeError(f"cannot convert {v!r} to RatFunc")
    return out


ZERO = RatFunc()
ONE = RatFunc(1)


def derivative(f: RatFunc, var: str) -> RatFunc:
    return rf(f).diff(var)


class UniPoly:
    """Polynomial in one auxiliary indeterminate with RatFunc coefficients.

    ``coeffs[i]`` is the coefficient of ``var**i``; trailing zeros are
    stripped so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs, var: str = "p"):
        cs = [rf(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def monomial(cls, n: int, var: str = "p", c=1) -> UniPoly:
        return cls([0] * n + [c], var)

    @classmethod
    def from_roots(cls, roots, var: str = "p") -> UniPoly:
        out = cls([1], var)
        for r in roots:
            out = out * cls([-rf(r), 1], var)
        return out

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lead(self) -> RatFunc:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> RatFunc:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def _check(self, other):
        if isinstance(other, UniPoly):
            if other.var != self.var and other.coeffs and self.coeffs:
                raise ValueError(f"mixed indeterminates {self.var} and {other.var}")
            return other
        return UniPoly([other], self.var)

    def __add__(self, other):
        other = self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self.coeff(i) + other.coeff(i) for i in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = rf(other)
            return UniPoly([a * c for a in self.coeffs], self.var)
        other = self._check(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly([], self.var)
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return UniPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = UniPoly([1], self.var)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly([other], self.var)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def diff(self) -> UniPoly:
        """Derivative in the auxiliary indeterminate."""
        return UniPoly([c * i for i, c in enumerate(self.coeffs)][1:], self.var)

    def diff_xy(self, var: str) -> UniPoly:
        return UniPoly([c.diff(var) for c in self.coeffs], self.var)

    def map(self, fn) -> UniPoly:
        return UniPoly([fn(c) for c in self.coeffs], self.var)

    def __call__(self, value):
        """Horner evaluation at ``value`` (RatFunc, jet, number...)."""
        if not self.coeffs:
            return value * 0
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * value + c
        return acc

    def has_constant_coeffs(self) -> bool:
        return all(c.is_constant() for c in self.coeffs)

    def divmod_linear(self, root):
        """Synthetic division by ``(var - root)``; returns quotient and remainder."""
        root = rf(root)
        n = len(self.coeffs)
        if n == 0:
            return UniPoly([], self.var), ZERO
        q = [ZERO] * (n - 1)
        acc = self.coeffs[-1]
        for i in range(n - 2, -1, -1):
            q[i] = acc
            acc = acc * root + self.coeffs[i]
        return UniPoly(q, self.var), acc

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            cs = str(c)
            if not mono:
                parts.append(f"({cs})" if not _atomic(cs) else cs)
            elif c == ONE:
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)


def _atomic(s: str) -> bool:
    return " " not in s


# ---------------------------------------------------------------------------
# resultants


def _clear_denominators(P: UniPoly):
    """Return (L, coefficient polynomials) with P = (1/L) * sum c_i var^i."""
    L = RING.one
    for c in P.coeffs:
        if c.den != RING.one:
            L = L * c.den.exquo(L.gcd(c.den))
    return L, [(c * rf(L)).num for c in P.coeffs]


def bareiss_det(M) -> BivarPoly:
    """Fraction-free determinant of a square matrix of polynomials."""
    n = len(M)
    if n == 0:
        return RING.one
    A = [list(row) for row in M]
    sign = 1
    prev = RING.one
    for k in range(n - 1):
        if not A[k][k]:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return RING.zero
        pivot = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            for j in range(k + 1, n):
                A[i][j] = (pivot * A[i][j] - aik * A[k][j]).exquo(prev)
            A[i][k] = RING.zero
        prev = pivot
    return A[n - 1][n - 1] if sign > 0 else -A[n - 1][n - 1]


def sylvester_matrix(P: list, Q: list):
    """Sylvester matrix of coefficient lists (ascending degree), P-rows first."""
    n, m = len(P) - 1, len(Q) - 1
    size = n + m
    rows = []
    for i in range(m):
        row = [RING.zero] * size
        for d, c in enumerate(reversed(P)):
            row[i + d] = c
        rows.append(row)
    for i in range(n):
        row = [RING.zero] * size
        for d, c in enumerate(reversed(Q)):
            row[i + d] = c
        rows.append(row)
    return rows


def resultant(P: UniPoly, Q: UniPoly) -> RatFunc:
    """Sylvester resultant with the rows of ``P`` placed first."""
    if P.is_zero() or Q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    if P.var != Q.var:
        raise ValueError(f"mixed indeterminates {P.var} and {Q.var}")
    n, m = P.degree(), Q.degree()
    if n == 0 and m == 0:
        return ONE
    LP, cp = _clear_denominators(P)
    LQ, cq = _clear_denominators(Q)
    det = bareiss_det(sylvester_matrix(cp, cq))
    return RatFunc(det, LP**m * LQ**n)


def discriminant(P: UniPoly) -> RatFunc:
    """``(-1)^(n(n-1)/2) * Res(P, P') / lead(P)``, which is ``b^2 - 4ac`` for quadratics."""
    n = P.degree()
    if n < 2:
        raise ValueError(f"discriminant needs degree >= 2, got {n}")
    r = resultant(P, P.diff()) / P.lead()
    return -r if (n * (n - 1) // 2) % 2 else r


def rational_roots(P: UniPoly) -> list:
    """Rational roots of a constant-coefficient polynomial, with multiplicity, sorted."""
    if P.is_zero():
        raise ValueError("zero polynomial")
    cs = [c.constant() for c in P.coeffs]
    den = reduce(lcm, (int(c.denominator) for c in cs), 1)
    ints = [int(c * den) for c in cs]
    roots = []
    while ints and ints[0] == 0:
        roots.append(mpq(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return roots
    cands = set()
    for a in divisors(abs(ints[0])):
        for b in divisors(abs(ints[-1])):
            cands.add(mpq(a, b))
            cands.add(mpq(-a, b))
    for r in sorted(cands):
        while len(ints) > 1 and _eval_int(ints, r) == 0:
            roots.append(r)
            ints = _deflate(ints, r)
    return sorted(roots)


def _eval_int(cs, r):
    acc = mpq(0)
    for c in reversed(cs):
        acc = acc * r + c
    return acc


def _deflate(cs, r):
    """Divide ascending coefficients by (t - r), keeping integrality up to scale."""
    n = len(cs)
    q = [mpq(0)] * (n - 1)
    acc = mpq(cs[-1])
    for i in range(n - 2, -1, -1):
        q[i] = acc
        acc = acc * r + cs[i]
    den = reduce(lcm, (int(c.denominator) for c in q), 1)
    return [int(c * den) for c in q]
