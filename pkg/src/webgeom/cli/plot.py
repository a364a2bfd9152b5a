"""Byte-deterministic SVG drawings of webs.

Level curves of rational first integrals are traced by marching squares
on an exact rational grid, so every coordinate is an exact rational until
it is rounded to two decimals for output.  Foliations given by slopes and
implicit webs are drawn as direction fields; roots are found with mpmath
at a fixed precision, which is platform independent.
"""

from __future__ import annotations

import mpmath
from gmpy2 import mpq

from ..algebra import RatFunc, UniPoly, discriminant, to_rational
from ..webmodel import INFINITY, ImplicitWeb, PlanarWeb

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
)
SIZE = 400
LEVELS = 11
SHADE = "#e0e0e0"
_DPS = 30


def _fmt(v: mpq) -> str:
    q = int((mpq(v) * 100 + mpq(1, 2)) // 1)
    sign = "-" if q < 0 else ""
    q = abs(q)
    return f"{sign}{q // 100}.{q % 100:02d}"


class _Frame:
    def __init__(self, region, n):
        self.x0, self.x1, self.y0, self.y1 = (to_rational(v) for v in region)
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("region must satisfy x0 < x1 and y0 < y1")
        if n < 2:
            raise ValueError("resolution must be at least 2")
        self.n = n
        self.xs = [self.x0 + (self.x1 - self.x0) * i / n for i in range(n + 1)]
        self.ys = [self.y0 + (self.y1 - self.y0) * j / n for j in range(n + 1)]

    def px(self, x):
        return (x - self.x0) * SIZE / (self.x1 - self.x0)

    def py(self, y):
        return (self.y1 - y) * SIZE / (self.y1 - self.y0)

    def point(self, x, y) -> str:
        return f"{_fmt(self.px(x))} {_fmt(self.py(y))}"


def _poly_at(p, x, y):
    return mpq(p.evaluate([(p.ring.gens[0], x), (p.ring.gens[1], y)]))


def _sample(u: RatFunc, fr: _Frame):
    vals, dens = [], []
    for x in fr.xs:
        vrow, drow = [], []
        for y in fr.ys:
            d = _poly_at(u.den, x, y)
            drow.append(d)
            vrow.append(_poly_at(u.num, x, y) / d if d else None)
        vals.append(vrow)
        dens.append(drow)
    return vals, dens


def _levels(vals):
    finite = sorted({v for row in vals for v in row if v is not None})
    if len(finite) < 2:
        return []
    picks = []
    for i in range(LEVELS):
        v = finite[(2 * i + 1) * len(finite) // (2 * LEVELS)]
        if v not in picks:
            picks.append(v)
    return picks


def _cross(p, q, vp, vq, c):
    t = (c - vp) / (vq - vp)
    return (p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t)


def _contour_segments(u: RatFunc, fr: _Frame):
    vals, dens = _sample(u, fr)
    levels = _levels(vals)
    segs = []
    for i in range(fr.n):
        for j in range(fr.n):
            corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            ds = [dens[a][b] for a, b in corners]
            if any(d == 0 for d in ds) or len({d > 0 for d in ds}) > 1:
                continue  # a pole runs through this cell
            vs = [vals[a][b] for a, b in corners]
            pts = [(fr.xs[a], fr.ys[b]) for a, b in corners]
            for c in levels:
                above = [v > c for v in vs]
                if all(above) or not any(above):
                    continue
                edges = {}
                for e in range(4):
                    a, b = e, (e + 1) % 4
                    if above[a] != above[b]:
                        edges[e] = _cross(pts[a], pts[b], vs[a], vs[b], c)
                if len(edges) == 2:
                    p, q = edges.values()
                    segs.append((p, q))
                    continue
                # saddle: decide with the mean of the corners
                center_above = sum(vs) / 4 > c
                if center_above == above[0]:
                    pairs = ((0, 1), (2, 3))
                else:
                    pairs = ((3, 0), (1, 2))
                segs.extend((edges[a], edges[b]) for a, b in pairs)
    return segs


def _direction_segments(slopes_at, fr: _Frame):
    """Short segments through cell centers along each real slope."""
    half = mpq(SIZE, 5 * fr.n)  # in pixels
    segs = []
    with mpmath.workdps(_DPS):
        for i in range(fr.n):
            for j in range(fr.n):
                cx = (fr.xs[i] + fr.xs[i + 1]) / 2
                cy = (fr.ys[j] + fr.ys[j + 1]) / 2
                X, Y = fr.px(cx), fr.py(cy)
                for m in slopes_at(cx, cy):
                    if m is INFINITY:
                        dx, dy = mpq(0), half
                    else:
                        # slope in pixel units
                        sm = _mpf(m) * _mpf((fr.x1 - fr.x0) / (fr.y1 - fr.y0))
                        norm = mpmath.sqrt(1 + sm * sm)
                        dx = half * _to_mpq(1 / norm)
                        dy = -half * _to_mpq(sm / norm)
                    segs.append(((X - dx, Y - dy), (X + dx, Y + dy)))
    return segs


def _mpf(v):
    if isinstance(v, type(mpq(0))):
        return mpmath.mpf(int(v.numerator)) / int(v.denominator)
    return mpmath.mpf(v)


def _to_mpq(v) -> mpq:
    m, e = mpmath.mpf(v).man_exp
    return mpq(int(m)) * (mpq(2) ** e if e >= 0 else mpq(1, 2 ** (-e)))


def _real_roots(coeffs):
    """Real roots of a polynomial with rational coefficients (ascending)."""
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if len(coeffs) < 2:
        return []
    if len(coeffs) == 2:
        return [-coeffs[0] / coeffs[1]]
    roots = mpmath.polyroots([_mpf(c) for c in reversed(coeffs)], maxsteps=200, extraprec=2 * _DPS)
    eps = mpmath.mpf(10) ** (-_DPS // 2)
    return sorted(mpmath.re(r) for r in roots if abs(mpmath.im(r)) <= eps)


def _slope_value(t, x, y):
    if t is INFINITY:
        return INFINITY
    d = _poly_at(t.den, x, y)
    if not d:
        return INFINITY
    return _poly_at(t.num, x, y) / d


def _shade_cells(disc: RatFunc, fr: _Frame):
    rects = []
    for j in range(fr.n):
        run = None
        for i in range(fr.n + 1):
            neg = False
            if i < fr.n:
                cx = (fr.xs[i] + fr.xs[i + 1]) / 2
                cy = (fr.ys[j] + fr.ys[j + 1]) / 2
                d = _poly_at(disc.den, cx, cy)
                neg = bool(d) and _poly_at(disc.num, cx, cy) * d < 0
            if neg and run is None:
                run = i
            elif not neg and run is not None:
                rects.append((run, i, j))
                run = None
    out = []
    for i0, i1, j in rects:
        x, y = fr.px(fr.xs[i0]), fr.py(fr.ys[j + 1])
        w = fr.px(fr.xs[i1]) - x
        h = fr.py(fr.ys[j]) - y
        out.append(f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" fill="{SHADE}"/>')
    return out


def _path(segs, fr: _Frame, pixel: bool) -> str:
    parts = []
    for p, q in segs:
        if pixel:
            parts.append(f"M{_fmt(p[0])} {_fmt(p[1])}L{_fmt(q[0])} {_fmt(q[1])}")
        else:
            parts.append(f"M{fr.point(*p)}L{fr.point(*q)}")
    return "".join(parts)


def plot(web, region=(-1, 1, -1, 1), resolution: int = 40, shade: bool = False) -> str:
    """SVG 1.1 document of ``web`` (a PlanarWeb or an ImplicitWeb) over ``region``."""
    fr = _Frame(region, resolution)
    layers = []
    disc = None
    if isinstance(web, ImplicitWeb):
        P: UniPoly = web.slope_poly
        disc = discriminant(P) if shade else None

        def roots_at(x, y):
            return _real_roots([c(x, y) if _poly_at(c.den, x, y) else mpq(0) for c in P.coeffs])

        layers.append((0, _direction_segments(roots_at, fr), True))
    elif isinstance(web, PlanarWeb):
        for idx, f in enumerate(web.foliations):
            if f.kind == "first_integral":
                layers.append((idx, _contour_segments(f.data[0], fr), False))
            elif f.kind in ("slope", "closed_form"):
                t = f.slope_function()
                layers.append((idx, _direction_segments(lambda x, y, t=t: [_slope_value(t, x, y)], fr), True))
            else:
                raise ValueError("jet-only foliations cannot be drawn")
        if shade:
            slopes = [f.slope_function() for f in web.foliations]
            if all(s is not INFINITY for s in slopes):
                disc = discriminant(UniPoly.from_roots(slopes))
    else:
        raise TypeError("plot expects a PlanarWeb or an ImplicitWeb")
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff" stroke="#000000"/>',
    ]
    if disc is not None:
        lines.extend(_shade_cells(disc, fr))
    for idx, segs, pixel in layers:
        color = PALETTE[idx % len(PALETTE)]
        lines.append(f'<path d="{_path(segs, fr, pixel)}" fill="none" stroke="{color}" stroke-width="1"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
