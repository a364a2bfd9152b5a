"""The ``.web`` description format: strict JSON, unknown keys rejected.

A description holds ``variables``, an optional ``base_point`` and exactly
one payload: ``foliations``, ``implicit`` (a polynomial in ``p``), ``curve``
or ``param`` (with ``singular_fibers``).  Numbers are written as strings so
rationals such as ``"1/3"`` survive a round trip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..algebra import RatFunc, UniPoly, to_rational
from ..dualweb import ParamCurve, PlaneCurve
from ..webmodel import INFINITY, Foliation, ImplicitWeb, PlanarWeb, find_base_point, make_web
from .parser import evaluate, parse

PAYLOADS = ("foliations", "implicit", "curve", "param")
KEYS = {"name", "note", "variables", "base_point", "singular_fibers", "expected", "unsupported", *PAYLOADS}
FOLIATION_KINDS = ("first_integral", "slope", "closed_form")


class FormatError(ValueError):
    pass


@dataclass
class WebDescription:
    kind: str
    payload: object
    variables: tuple = ("x", "y")
    base_point: tuple | None = None
    singular_fibers: list = field(default_factory=list)
    name: str = ""
    note: str = ""
    expected: dict = field(default_factory=dict)
    unsupported: str = ""

    def to_json(self) -> dict:
        out = {}
        if self.name:
            out["name"] = self.name
        if self.note:
            out["note"] = self.note
        out["variables"] = list(self.variables)
        if self.base_point is not None:
            out["base_point"] = [str(v) for v in self.base_point]
        if self.kind != "unsupported":
            out[self.kind] = self.payload
        if self.kind == "param":
            out["singular_fibers"] = self.singular_fibers
        if self.expected:
            out["expected"] = self.expected
        if self.unsupported:
            out["unsupported"] = self.unsupported
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"


def _rational(text, where: str):
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise FormatError(f"{where}: expected a rational written as a string")
    try:
        v = evaluate(parse(str(text), ()), ())
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None
    if not v.is_constant():
        raise FormatError(f"{where}: not a rational number")
    return v.constant()


def _expr(text, variables, where: str):
    if not isinstance(text, str):
        raise FormatError(f"{where}: expected an expression string")
    try:
        return parse(text, variables)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None


def _check_foliation(item, variables, i):
    if not isinstance(item, dict) or len(item) != 1:
        raise FormatError(f"foliations[{i}]: expected an object with exactly one of {', '.join(FOLIATION_KINDS)}")
    (kind, value), = item.items()
    if kind not in FOLIATION_KINDS:
        raise FormatError(f"foliations[{i}]: unknown key {kind!r}")
    if kind == "closed_form":
        if not isinstance(value, dict) or set(value) != {"dx", "dy"}:
            raise FormatError(f"foliations[{i}].closed_form: expected exactly the keys dx and dy")
        for part in ("dx", "dy"):
            _expr(value[part], variables, f"foliations[{i}].closed_form.{part}")
    elif kind == "slope" and value == "oo":
        pass
    else:
        _expr(value, variables, f"foliations[{i}].{kind}")


def from_json(data) -> WebDescription:
    if not isinstance(data, dict):
        raise FormatError("a web description is a JSON object")
    unknown = sorted(set(data) - KEYS)
    if unknown:
        raise FormatError(f"unknown key(s): {', '.join(unknown)}")
    present = [k for k in PAYLOADS if k in data]
    if not present and "unsupported" in data:
        if not isinstance(data["unsupported"], str) or not data["unsupported"]:
            raise FormatError("unsupported: expected a nonempty reason")
        return WebDescription("unsupported", None, name=data.get("name", ""), note=data.get("note", ""),
                              unsupported=data["unsupported"])
    if len(present) != 1:
        raise FormatError(f"exactly one of {', '.join(PAYLOADS)} is required, found {len(present)}")
    kind = present[0]
    default_vars = ["t"] if kind == "param" else ["x", "y"]
    variables = data.get("variables", default_vars)
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise FormatError("variables: expected a list of names")
    want = 1 if kind == "param" else 2
    if len(variables) != want or len(set(variables)) != want or "p" in variables:
        raise FormatError(f"variables: expected {want} distinct names other than p")
    variables = tuple(variables)
    base = data.get("base_point")
    if base is not None:
        if not isinstance(base, list) or len(base) != 2:
            raise FormatError("base_point: expected two rationals")
        base = tuple(_rational(v, "base_point") for v in base)
    payload = data[kind]
    fibers = []
    if kind == "foliations":
        if not isinstance(payload, list) or len(payload) < 2:
            raise FormatError("foliations: expected a list of at least two foliations")
        for i, item in enumerate(payload):
            _check_foliation(item, variables, i)
    elif kind == "implicit":
        _expr(payload, variables + ("p",), "implicit")
    elif kind == "curve":
        _expr(payload, variables, "curve")
    else:
        if not isinstance(payload, list) or len(payload) != 2:
            raise FormatError("param: expected two expressions in the parameter")
        for i, part in enumerate(payload):
            _expr(part, variables, f"param[{i}]")
        fibers = data.get("singular_fibers", [])
        if not isinstance(fibers, list) or not all(isinstance(f, list) for f in fibers):
            raise FormatError("singular_fibers: expected a list of lists of parameters")
        for f in fibers:
            for t in f:
                _rational(t, "singular_fibers")
    if kind != "param" and "singular_fibers" in data:
        raise FormatError("singular_fibers only accompanies param")
    for key in ("name", "note", "unsupported"):
        if key in data and not isinstance(data[key], str):
            raise FormatError(f"{key}: expected a string")
    expected = data.get("expected", {})
    if not isinstance(expected, dict):
        raise FormatError("expected: expected an object")
    return WebDescription(
        kind, payload, variables, base, fibers,
        data.get("name", ""), data.get("note", ""), expected, data.get("unsupported", ""),
    )


def loads(text: str) -> WebDescription:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return from_json(data)


def load(path) -> WebDescription:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# --- building the mathematical objects ---------------------------------------


def _ratfunc(text, variables) -> RatFunc:
    return evaluate(parse(text, variables), variables)


def _foliation(item, variables) -> Foliation:
    (kind, value), = item.items()
    if kind == "first_integral":
        return Foliation.first_integral(_ratfunc(value, variables))
    if kind == "slope":
        return Foliation.slope(INFINITY if value == "oo" else _ratfunc(value, variables))
    return Foliation.closed_form(_ratfunc(value["dx"], variables), _ratfunc(value["dy"], variables))


def _require(d: WebDescription, kind: str):
    if d.unsupported:
        raise FormatError(f"{d.name or 'this web'} has no exact rational model: {d.unsupported}")
    if d.kind != kind:
        raise FormatError(f"expected a {kind} description, found {d.kind}")


def to_web(d: WebDescription) -> PlanarWeb:
    _require(d, "foliations")
    fols = [_foliation(item, d.variables) for item in d.payload]
    return make_web(*fols, base=d.base_point)


def _uni_divide(a, b):
    if isinstance(b, UniPoly):
        if b.degree() > 0:
            raise FormatError("p may not appear in a denominator")
        b = b.coeff(0)
    if b.is_zero():
        raise ZeroDivisionError("division by an expression that is identically zero")
    return a * (1 / b)


def to_implicit(d: WebDescription) -> ImplicitWeb:
    _require(d, "implicit")
    env = {d.variables[0]: UniPoly([RatFunc.x()]), d.variables[1]: UniPoly([RatFunc.y()]), "p": UniPoly([0, 1])}
    P = evaluate(parse(d.payload, d.variables + ("p",)), env=env, divide=_uni_divide)
    if not isinstance(P, UniPoly):
        P = UniPoly([P])
    if P.degree() < 1:
        raise FormatError("implicit: the polynomial must involve p")
    base = d.base_point
    if base is None:
        base = find_base_point([Foliation.first_integral(RatFunc.x()), Foliation.first_integral(RatFunc.y())])
    return ImplicitWeb(P, base)


def to_curve(d: WebDescription) -> PlaneCurve:
    _require(d, "curve")
    return PlaneCurve(_ratfunc(d.payload, d.variables))


def to_param(d: WebDescription) -> ParamCurve:
    _require(d, "param")
    x, y = (_ratfunc(part, d.variables) for part in d.payload)
    fibers = [[to_rational(_rational(t, "singular_fibers")) for t in f] for f in d.singular_fibers]
    return ParamCurve(x, y, fibers)


def parameter_function(text: str, d: WebDescription) -> RatFunc:
    """An expression in the parameter of a ``param`` description."""
    return _ratfunc(text, d.variables)
