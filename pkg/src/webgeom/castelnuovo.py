"""Castelnuovo numbers and rational normal curves through rational points."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from gmpy2 import mpq

from . import linalg
from .algebra import format_terms, to_rational
from .errors import MathRefusal


def _pi_sum(n: int, k: int) -> int:
    return sum(max(0, k - (j + 1) * (n - 1) - 1) for j in range(max(k - 2, 0)))


def _pi_closed(n: int, k: int) -> int:
    m, eps = divmod(k - 1, n - 1)
    return comb(m, 2) * (n - 1) + m * eps


def _pi_closed_shifted(n: int, k: int) -> int:
    if k <= n:
        return 0
    rho, eps = divmod(k - n - 1, n - 1)
    return (eps + 1) * comb(rho + 2, 2) + (n - 2 - eps) * comb(rho + 1, 2)


def pi(n: int, k: int) -> int:
    """Castelnuovo number; three independent formulas must agree."""
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    values = {_pi_sum(n, k), _pi_closed(n, k), _pi_closed_shifted(n, k)}
    if len(values) != 1:
        raise AssertionError(f"Castelnuovo formulas disagree for n={n}, k={k}: {values}")
    return values.pop()


# ---------------------------------------------------------------------------
# points


def normalize_point(p) -> tuple:
    p = [to_rational(c) for c in p]
    lead = next((c for c in p if c), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    return tuple(c / lead for c in p)


@dataclass(frozen=True)
class PointConfig:
    points: tuple

    def __init__(self, points):
        pts = tuple(normalize_point(p) for p in points)
        if len(set(pts)) != len(pts):
            raise ValueError("points are not pairwise distinct")
        if len({len(p) for p in pts}) > 1:
            raise ValueError("points of different dimensions")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points[0]) - 1


def _monomials(nvars: int, degree: int):
    return [e for e in itertools.product(range(degree + 1), repeat=nvars) if sum(e) == degree]


def _eval_mono(p, e):
    out = mpq(1)
    for c, k in zip(p, e):
        if k:
            out *= c**k
    return out


def conditions_on_hypersurfaces(P: PointConfig, j: int) -> int:
    monos = _monomials(P.n + 1, j)
    rows = [[_eval_mono(p, e) for e in monos] for p in P.points]
    return linalg.rank(rows, len(monos))


def general_position(P: PointConfig) -> bool:
    n = P.n
    size = min(n + 1, len(P.points))
    for sub in itertools.combinations(P.points, size):
        if linalg.rank(list(sub), n + 1) < size:
            return False
    return True


# ---------------------------------------------------------------------------
# rational normal curves


@dataclass(frozen=True)
class RNC:
    """``(s:t) -> [F_0(s,t) : ... : F_n(s,t)]``; ``forms[i][r]`` multiplies ``s^(n-r) t^r``."""

    forms: tuple

    @property
    def n(self) -> int:
        return len(self.forms) - 1

    def point(self, s, t) -> tuple:
        s, t = to_rational(s), to_rational(t)
        n = self.n
        return tuple(sum(c * s ** (n - r) * t**r for r, c in enumerate(f)) for f in self.forms)

    def contains(self, p) -> bool:
        """Membership test: solve for ``(s:t)`` from the forms' kernel condition."""
        p = normalize_point(p)
        n = self.n
        # p lies on the curve iff some (s:t) maps to a multiple of p; the
        # 2x2 minors p_i F_j - p_j F_i give binary forms whose common root is sought
        minors = []
        for i, j in itertools.combinations(range(n + 1), 2):
            minors.append([p[i] * a - p[j] * b for a, b in zip(self.forms[j], self.forms[i])])
        g = None
        for m in minors:
            g = _trim(m) if g is None else _bgcd(g, m)
        if g is None:
            return False
        # common root of all minors: gcd of positive degree, or all minors zero
        if not g:
            return True
        return len(g) > 1 or _infinite_root(minors)

    def is_nondegenerate(self) -> bool:
        return linalg.rank([list(f) for f in self.forms], self.n + 1) == self.n + 1

    def sample(self, count: int):
        out = []
        t = 0
        while len(out) < count:
            pts = [(1, t)] if t == 0 else [(1, t), (1, -t)]
            for s, tt in pts:
                if len(out) < count:
                    out.append(normalize_point(self.point(s, tt)))
            t += 1
        return out

    def __str__(self):
        n = self.n
        parts = []
        for f in self.forms:
            terms = [(c, "*".join(x for x in (_pw("s", n - r), _pw("t", r)) if x)) for r, c in enumerate(f)]
            parts.append(format_terms(terms))
        return "[" + " : ".join(parts) + "]"


def _pw(v, e):
    return "" if e == 0 else (v if e == 1 else f"{v}^{e}")


def _trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def _infinite_root(forms):
    # coefficient lists in t (dehomogenized at s = 1) miss the root (0:1) when
    # the degree drops; (s:t) = (0:1) is a common root iff every top coefficient is 0
    return all(not f[-1] for f in forms)


def _bgcd(a, b):
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
    return a


def _solve_square(M, v):
    z = linalg.solve(M, v, len(M))
    if z is None:
        raise MathRefusal("degenerate position: singular frame")
    return z


def steiner_rnc(points) -> RNC:
    """The rational normal curve through ``n + 3`` points in general position."""
    P = points if isinstance(points, PointConfig) else PointConfig(points)
    n = P.n
    if len(P.points) != n + 3:
        raise ValueError(f"need exactly {n + 3} points in P^{n}")
    if not general_position(P):
        raise MathRefusal("points are not in general position")
    frame = P.points[: n + 1]
    # columns of M are the first n+1 points; a = M^-1 p_{n+2}, b = M^-1 p_{n+3}
    M = [[frame[c][r] for c in range(n + 1)] for r in range(n + 1)]
    a = _solve_square(M, list(P.points[n + 1]))
    b = _solve_square(M, list(P.points[n + 2]))
    if any(not c for c in a + b):
        raise MathRefusal("points are not in general position")
    # coordinate i: prod_{j != i} (s/a_j - t/b_j)
    forms_std = []
    for i in range(n + 1):
        f = [mpq(1)]
        for j in range(n + 1):
            if j != i:
                lin = [1 / a[j], -1 / b[j]]
                f = [
                    (f[r] * lin[0] if r < len(f) else 0) + (f[r - 1] * lin[1] if r >= 1 else 0)
                    for r in range(len(f) + 1)
                ]
        forms_std.append(f)
    forms = tuple(
        tuple(sum(M[row][i] * forms_std[i][r] for i in range(n + 1)) for r in range(n + 1))
        for row in range(n + 1)
    )
    curve = RNC(forms)
    for p in P.points:
        if not curve.contains(p):
            raise AssertionError(f"constructed curve misses {p}")
    return curve


@dataclass
class CastelnuovoResult:
    curve: RNC | None
    conditions: int
    refusal: str = ""


def _hyperplane_through(points, n):
    basis = linalg.nullspace([list(p) for p in points], n + 1)
    if len(basis) != 1:
        raise MathRefusal("points are not in general position")
    return basis[0]


def _lin_eval(L, p):
    return sum(a * b for a, b in zip(L, p))


def castelnuovo_rnc(points) -> CastelnuovoResult:
    """Determinantal construction of the rational normal curve through ``k >= 2n+3`` points."""
    P = points if isinstance(points, PointConfig) else PointConfig(points)
    n, pts = P.n, P.points
    if len(pts) < 2 * n + 3:
        raise ValueError(f"need at least {2 * n + 3} points in P^{n}")
    if not general_position(P):
        raise MathRefusal("points are not in general position")
    conds = conditions_on_hypersurfaces(P, 2)
    if conds != 2 * n + 1:
        return CastelnuovoResult(None, conds, f"points impose {conds} conditions on quadrics, not {2 * n + 1}")
    F0 = _hyperplane_through(pts[:n], n)
    G0 = _hyperplane_through(pts[: n - 1] + (pts[n],), n)
    # quadrics F0*G - G0*F through every point; unknowns (F, G) in Q^{2(n+1)}
    m = n + 1
    rows = []
    for p in pts:
        f0, g0 = _lin_eval(F0, p), _lin_eval(G0, p)
        rows.append([-g0 * c for c in p] + [f0 * c for c in p])
    sols = linalg.nullspace(rows, 2 * m)
    # drop the trivial pair (F, G) = (F0, G0), which gives the zero quadric
    trivial = list(F0) + list(G0)
    R, piv = linalg.rref([trivial], 2 * m)
    chosen = [trivial]
    pairs = []
    for s in sols:
        if linalg.rank(chosen + [s], 2 * m) > len(chosen):
            chosen.append(s)
            pairs.append((s[:m], s[m:]))
    if len(pairs) != n - 1:
        return CastelnuovoResult(None, conds, f"found {len(pairs)} determinantal quadrics, expected {n - 1}")
    Fs = [F0] + [f for f, _ in pairs]
    Gs = [G0] + [g for _, g in pairs]
    # kernel of the n x (n+1) matrix s*F_i + t*G_i via signed maximal minors
    forms = []
    for col in range(m):
        sub = [[(Fs[r][c], Gs[r][c]) for c in range(m) if c != col] for r in range(n)]
        det = _binary_det(sub)
        sign = -1 if col % 2 else 1
        forms.append(tuple(sign * c for c in det))
    curve = RNC(tuple(forms))
    if not curve.is_nondegenerate():
        return CastelnuovoResult(None, conds, "determinantal locus is degenerate")
    for p in pts:
        if not curve.contains(p):
            return CastelnuovoResult(None, conds, f"point {p} is not on the determinantal curve")
    return CastelnuovoResult(curve, conds)


def _binary_det(M):
    """Determinant of a matrix of linear binary forms ``(a, b) = a s + b t``."""
    n = len(M)
    if n == 1:
        return list(M[0][0])
    total = [mpq(0)] * (n + 1)
    for c in range(n):
        a, b = M[0][c]
        if not a and not b:
            continue
        minor = _binary_det([row[:c] + row[c + 1 :] for row in M[1:]])
        sign = -1 if c % 2 else 1
        for r, v in enumerate(minor):
            total[r] += sign * a * v
            total[r + 1] += sign * b * v
    return total
