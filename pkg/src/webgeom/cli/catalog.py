"""Named webs with exact rational models and their known invariants.

Every expected value records where it comes from in a ``source`` field:
``"literature"`` for results established in the classical theory and
``"computed"`` for values frozen from this package's own exact runs.
Webs without an exact rational model are listed with ``unsupported`` set.
"""

from __future__ import annotations

from ..castelnuovo import pi
from .webfile import WebDescription

LITERATURE = "literature"
COMPUTED = "computed"


def _v(value, source=LITERATURE):
    return {"value": value, "source": source}


def _exceptional(k: int, **more) -> dict:
    out = {
        "rank": _v(pi(2, k)),
        "mihaileanu_zero": _v(True),
        "linearizable": _v(False),
    }
    out.update(more)
    return out


def _fols(*integrals):
    return [{"first_integral": u} for u in integrals]


_ENTRIES: dict = {}


def _add(name, kind, payload, expected=None, note="", unsupported="", fibers=None, variables=None):
    variables = tuple(variables or (("t",) if kind == "param" else ("x", "y")))
    _ENTRIES[name] = WebDescription(
        kind, payload, variables, None, fibers or [], name, note, expected or {}, unsupported
    )


# --- Bol's web and its extensions by the pencil of conics ----------------------

_add("bol5", "foliations", _fols("x", "y", "x/y", "(1-y)/(1-x)", "x*(1-y)/(y*(1-x))"),
     _exceptional(5, hexagonal=_v(True)),
     "Bol's 5-web: four pencils of lines through four points in general position and the pencil of conics through them")

_B5 = ("x", "y", "x/(1-y)", "y/(1-x)", "x*y/((1-x)*(1-y))")
_add("b5", "foliations", _fols(*_B5), _exceptional(5, hexagonal=_v(True)),
     "Bol's web in the chart used for the extensions b6, b7, b8")
_add("b6", "foliations", _fols(*_B5, "x+y"), _exceptional(6), "b5 with the foliation by x + y")
_add("b7", "foliations", _fols(*_B5, "x+y", "x/y"), _exceptional(7), "b6 with the foliation by x/y")
_add("b8", "foliations", _fols(*_B5, "x+y", "x/y", "(1-x)/(1-y)"), _exceptional(8),
     "b7 with the foliation by (1-x)/(1-y)")

# --- the trilogarithm web ---------------------------------------------------------

_add("spence_kummer9", "foliations", _fols(
    "x", "y", "x*y", "x/y", "(1-x)/(1-y)", "x*(1-y)/(y*(1-x))",
    "x*(1-y)/(1-x)", "(1-y)/(y*(1-x))", "x*(1-y)^2/(y*(1-x)^2)",
), _exceptional(9), "the 9-web carried by the Spence-Kummer functional equation of the trilogarithm")

# --- a simple series of exceptional webs ----------------------------------------

_LIN = ("x", "y", "x+y", "x-y")
for _name, _extra in [
    ("w1", ("x*y",)),
    ("w2", ("x*y", "x/y")),
    ("w3", ("x/y", "x^2+y^2")),
    ("w4", ("x*y", "x^2+y^2")),
    ("w5", ("x*y", "x^2-y^2")),
    ("w6", ("x*y", "x/y", "x^2-y^2")),
    ("w7", ("x*y", "x/y", "x^2+y^2")),
    ("w8", ("x*y", "x^2-y^2", "x^2+y^2")),
    ("w9", ("x*y", "x/y", "x^2-y^2", "x^2+y^2")),
]:
    _add(_name, "foliations", _fols(*_LIN, *_extra), _exceptional(4 + len(_extra)),
         "the four lines x, y, x+y, x-y with " + ", ".join(_extra))

# --- webs with a planar triple of Poincare-Blaschke curves ----------------------

_add("terr_b", "foliations", _fols("x", "y", "x+y", "x-y", "x^2-y^2"), _exceptional(5))
_add("terr_c", "foliations", _fols(
    "x", "y", "(x+y)^2/(1+y^2)", "y*(x^2*y-2*x-y)/(1+y^2)", "(x^2*y-2*x-y)/(x^2+2*x*y-1)",
), _exceptional(5))
_add("terr_d", "foliations", _fols("x", "y", "x+y", "x/y", "(x/y)*(x+y)"), _exceptional(5))
_add("buz_a", "unsupported", None, note="W(x, y, x+y, x-y, tanh(x) tanh(y))",
     unsupported="needs a transcendental first integral")
_add("buz_b", "unsupported", None, note="W(x, y, x+y, x-y, exp(x) + exp(y))",
     unsupported="needs a transcendental first integral")

# --- quasi-parallel 5-webs x, y, x-y, x+y, a(x) + b(y) of maximal rank ------------

_add("exabel_sum_of_squares", "foliations", _fols("x", "y", "x-y", "x+y", "x^2+y^2"), _exceptional(5))
_add("exabel_difference_of_squares", "foliations", _fols("x", "y", "x-y", "x+y", "x^2-y^2"), _exceptional(5))
for _name, _u in [("exabel_exp", "exp(x) + exp(y)"), ("exabel_log_sin", "log(sin(x) sin(y))"),
                  ("exabel_log_tanh", "log(tanh(x) tanh(y))")]:
    _add(_name, "unsupported", None, note=f"W(x, y, x-y, x+y, {_u})",
         unsupported="needs a transcendental first integral")
_add("e_tau", "unsupported", None, note="quasi-parallel 5-webs on a product of elliptic curves",
     unsupported="first integral is a quotient of theta functions")

# --- webs invariant under homotheties ------------------------------------------
# [omega] is the web of the symmetric form omega; d(u) is the foliation by levels of u.

_add("a3_2", "foliations", _fols("x", "y", "x+y", "x-y", "x*y"), _exceptional(5),
     "[(dx^2 - dy^2) dx dy] with d(xy); the same web as w1")
_add("a4_1", "foliations", _fols("x", "y", "x-y", "y/x", "x*y"), _exceptional(5),
     "[(dx - dy) dx dy (x dy - y dx)] with d(xy)")
_add("a4_2", "foliations", _fols("x", "y", "x+y", "x-y", "y/x", "x*y"), _exceptional(6),
     "[(dx^2 - dy^2) dx dy (x dy - y dx)] with d(xy); the same web as w2")
_add("a1_4_model", "foliations", _fols("x", "y", "x+y", "x-y", "x^2+y^2"), {
    "rank": _v(6, COMPUTED), "mihaileanu_zero": _v(True, COMPUTED), "linearizable": _v(False, COMPUTED),
}, "rational model of [dx^4 - dy^4] with d(xy): a complex linear change of chart sends the four "
   "lines to x, y, x+y, x-y and xy to x^2+y^2")
_A5 = ("x", "y", "x+y", "y/x")
_add("a5a", "foliations", _fols(*_A5, "x*y*(x+y)"), _exceptional(5),
     "[dx dy (dx+dy) (x dy - y dx)] with d(xy(x+y))")
_add("a5b", "foliations", _fols(*_A5, "x*y/(x+y)"), _exceptional(5),
     "[dx dy (dx+dy) (x dy - y dx)] with d(xy/(x+y))")
_add("a5c", "foliations", _fols(*_A5, "(x^2+x*y+y^2)/(x*y*(x+y))"), _exceptional(5),
     "[dx dy (dx+dy) (x dy - y dx)] with d((x^2+xy+y^2)/(xy(x+y)))")
_NO_ROOTS = "slopes are non-real roots of unity, outside exact rational data"
for _name, _note in [
    ("a1_k", "[dx^k - dy^k] with d(xy), k >= 4"),
    ("a2_k", "[(dx^k - dy^k)(x dy - y dx)] with d(xy), k >= 3"),
    ("a3_k", "[(dx^k - dy^k) dx dy] with d(xy), k >= 3"),
    ("a4_k", "[(dx^k - dy^k) dx dy (x dy - y dx)] with d(xy), k >= 3"),
    ("a5d", "[dx (dx^3 + dy^3)] with d(x(x^3+y^3))"),
    ("a6a", "[dx (dx^3 + dy^3)(x dy - y dx)] with d(x(x^3+y^3))"),
    ("a6b", "[dx dy (dx^3 + dy^3)] with d(x^3+y^3)"),
    ("a7", "[dx dy (dx^3 + dy^3)(x dy - y dx)] with d(x^3+y^3)"),
    ("h5", "[(dx^3 + dy^3) d(x/y)] with d((x^3+y^3+1)/(xy))"),
    ("h10", "the Hesse pencil with the nine pencils of lines through its base points"),
]:
    _add(_name, "unsupported", None, note=_note, unsupported=_NO_ROOTS)

# --- parallel and algebraic webs -------------------------------------------------

_add("parallel4", "foliations", _fols("x", "y", "x+y", "x-y"),
     {"rank": _v(3), "linearizable": _v(True), "mihaileanu_zero": _v(True)})
_add("parallel5", "foliations", _fols("x", "y", "x+y", "x-y", "x+2*y"),
     {"rank": _v(6), "linearizable": _v(True), "mihaileanu_zero": _v(True)})
_add("lines3", "curve", "x*y*(x+y-1)", {"hexagonal": _v(True), "rank": _v(1)},
     "dual web of three lines in general position")
_add("parabola", "curve", "y - x^2", {"discriminant_degree": _v(2)})
_add("nodal_cubic", "curve", "y^2 - x^2*(x+1)", {"rank": _v(1), "discriminant_degree": _v(6)})
_add("fermat4", "curve", "x^4 + y^4 + 1", {"discriminant_degree": _v(12)})
_add("rational_quartic", "param", ["t^3", "t^4"], {"abelian": _v({
    "1/t": False, "1/t^2": True, "1/t^3": True, "1/t^4": False, "1/t^5": False, "1/t^6": True, "1/t^7": False,
})}, "the quartic x^4 = y^3 with its singular point at t = 0", fibers=[["0"]])
_add("cusp", "param", ["t^2", "t^3"], {"abelian": _v({"1/t": False, "1/t^2": True})},
     "the cuspidal cubic x^3 = y^2", fibers=[["0"]])
_add("fold2", "implicit", "p^2 - x", note="2-web with no real leaves where x < 0")


def names() -> list:
    return list(_ENTRIES)


def entry(name: str) -> WebDescription:
    try:
        return _ENTRIES[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}") from None
