"""Command line entry point: ``webgeom <subcommand> ...``.

Exit status is 0 on success, 2 when a computation is refused for a
mathematical reason (a singular base point, a vertical slope...) and 1 on
usage errors such as a malformed file.
"""

from __future__ import annotations

import argparse
import os
import sys

from ..abelrank import (
    chern_bound,
    eigen_polynomial,
    is_infinitesimal_automorphism,
    rank_jets,
    rank_with_automorphism,
)
from ..algebra import RatFunc, poly_str, to_rational, total_degree
from ..castelnuovo import castelnuovo_rnc, pi, steiner_rnc
from ..curvature import curvature3, holonomy_jet, is_hexagonal, mihaileanu_curvature
from ..dualweb import (
    AbelianDifferential,
    PlaneCurve,
    abelian_basis,
    branch_jets,
    dual_discriminant,
    dual_implicit,
    dual_web_of_lines,
    find_splitting_line,
    is_abelian_parametrized,
    rank_dual,
    trace_form,
    trace_vanishes,
)
from ..errors import MathRefusal
from ..linearize import is_linear, is_linearizable
from ..webmodel import (
    INFINITY,
    PlanarWeb,
    chart_rotate,
    discriminant_web,
    implicit_from_slopes,
    tangency,
    validate,
)
from . import catalog
from .parser import ParseError, parse_ratfunc
from .plot import plot
from .webfile import FormatError, WebDescription, load, parameter_function, to_curve, to_implicit, to_param, to_web


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _b(v: bool) -> str:
    return "true" if v else "false"


def _pt(p) -> str:
    return f"({p[0]}, {p[1]})"


# --- loading -------------------------------------------------------------------


def describe(target: str) -> WebDescription:
    """A ``.web`` file path or a catalog name."""
    if os.path.exists(target):
        return load(target)
    if target in catalog.names():
        return catalog.entry(target)
    raise UsageError(f"{target!r} is neither a file nor a catalog entry")


def _unsupported(d: WebDescription):
    if d.kind == "unsupported":
        raise MathRefusal(f"{d.name or 'this web'} has no exact rational model: {d.unsupported}")


def curve_of(d: WebDescription, chart=None) -> PlaneCurve:
    C = to_curve(d)
    if chart:
        x, y = RatFunc.x(), RatFunc.y()
        C = PlaneCurve(RatFunc(C.F).compose(x + chart * y, y))
    return C


def web_of(d: WebDescription, chart=None) -> PlanarWeb:
    """The planar web of a foliation list, or the exact dual of a union of lines."""
    _unsupported(d)
    if d.kind == "foliations":
        w = to_web(d)
        return chart_rotate(w, chart) if chart else w
    if d.kind == "curve":
        return dual_web_of_lines(curve_of(d, chart))
    raise MathRefusal(f"a {d.kind} description does not give rational foliations")


def free_chart(w: PlanarWeb, limit: int = 12) -> tuple:
    """``(c, rotated web)`` for the first integer ``c >= 0`` leaving no vertical slope."""
    for c in range(limit + 1):
        r = chart_rotate(w, c) if c else w
        if all(f.slope_function() is not INFINITY for f in r.foliations):
            try:
                if validate(r).smooth_at_base:
                    return c, r
            except MathRefusal:
                continue
    raise MathRefusal("no chart x + c y with small c removes the vertical slopes")


# --- computations shared by subcommands and catalog checks ------------------------


def rank_report(d: WebDescription, chart=None, nmax=None, window=None, numeric=False):
    _unsupported(d)
    if d.kind == "curve":
        C = curve_of(d, chart)
        try:
            w = dual_web_of_lines(C)
        except MathRefusal:
            return rank_dual(C, N_max=nmax, numeric=numeric), None
        return rank_jets(w, nmax, window)
    return rank_jets(web_of(d, chart), nmax, window)


def rank_line(report) -> str:
    line = report.summary()
    if report.details.get("numeric"):
        line += " [numeric]"
    return line


def hexagonal_of(d: WebDescription, chart=None, order: int = 6) -> str:
    _unsupported(d)
    if d.kind == "curve":
        C = curve_of(d, chart)
        try:
            return _b(is_hexagonal(dual_web_of_lines(C)))
        except MathRefusal:
            pass
        if C.k != 3:
            raise MathRefusal("jet hexagonality of a dual web needs a cubic")
        system = branch_jets(C, order=order + 1)
        fols = system.foliations()
        h = holonomy_jet(*fols, order, base=system.base)
        return f"{_b(h.is_identity())} (holonomy to order {order})"
    return _b(is_hexagonal(web_of(d, chart)))


def linearize_verdict(d: WebDescription, chart=None):
    w = web_of(d, chart)
    if chart is None:
        chart, w = free_chart(w)
    return chart, w, is_linearizable(w)


def discriminant_degree(d: WebDescription, chart=None) -> int:
    return total_degree(dual_discriminant(curve_of(d, chart)))


def abelian_answers(d: WebDescription, forms) -> dict:
    P = to_param(d)
    return {f: is_abelian_parametrized(P, parameter_function(f, d)) for f in forms}


# --- subcommands ----------------------------------------------------------------


def cmd_info(a, out):
    d = describe(a.web)
    if d.name:
        out(f"name: {d.name}")
    if d.note:
        out(f"note: {d.note}")
    _unsupported(d)
    out(f"kind: {d.kind}")
    if d.kind == "foliations":
        w = web_of(d, a.chart)
        out(f"web: {w}")
        out(f"foliations: {w.k}")
        out(f"base_point: {_pt(w.base)}")
        rep = validate(w)
        out("slopes_at_base: " + ", ".join(str(s) for s in rep.slopes))
        out(f"smooth_at_base: {_b(rep.smooth_at_base)}")
        if rep.smooth_at_base:
            out(f"chern_bound: {chern_bound(w)}")
        else:
            out("tangent_pairs: " + ", ".join(f"{i}-{j}" for i, j in rep.offending_pairs))
    elif d.kind == "curve":
        C = curve_of(d, a.chart)
        out(f"curve: {C}")
        out(f"degree: {C.k}")
        out(f"castelnuovo_bound: {pi(2, C.k)}")
    elif d.kind == "implicit":
        W = to_implicit(d)
        out(f"implicit: {W.slope_poly}")
        out(f"degree_in_p: {W.k}")
    else:
        P = to_param(d)
        out(f"param: ({P.x}, {P.y})")
        out("singular_fibers: " + "; ".join(", ".join(str(t) for t in f) for f in P.singular_fibers))


def cmd_curvature(a, out):
    w = web_of(describe(a.web), a.chart)
    if w.k < 3:
        raise MathRefusal("curvature needs at least three foliations")
    form = curvature3(*w.foliations) if w.k == 3 else mihaileanu_curvature(w)
    label = "curvature" if w.k == 3 else "mihaileanu"
    out(f"{label}: {form}")
    out(f"zero: {_b(form.is_zero())}")
    if a.at:
        x, y = _pair(a.at)
        try:
            out(f"value_at {_pt((x, y))}: {form(x, y)}")
        except ZeroDivisionError:
            raise MathRefusal(f"the curvature has a pole at {_pt((x, y))}") from None


def cmd_hexagonal(a, out):
    out(hexagonal_of(describe(a.web), a.chart))


def cmd_holonomy(a, out):
    w = web_of(describe(a.web), a.chart)
    idx = [int(i) for i in a.foliations.split(",")] if a.foliations else [0, 1, 2]
    if len(idx) != 3 or (w.k != 3 and not a.foliations):
        raise UsageError("holonomy needs a 3-web or --foliations i,j,l")
    try:
        fols = [w.foliations[i] for i in idx]
    except IndexError:
        raise UsageError("foliation index out of range") from None
    h = holonomy_jet(*fols, a.order, base=w.base)
    out(f"holonomy: {h}")
    out(f"identity: {_b(h.is_identity())}")


def cmd_rank(a, out):
    report, _ = rank_report(describe(a.web), a.chart, a.nmax, a.window, a.numeric)
    out(rank_line(report))


def cmd_relations(a, out):
    report, basis = rank_report(describe(a.web), a.chart, a.nmax, a.window)
    out(rank_line(report))
    if basis is None:
        return
    for n, rel in enumerate(basis, 1):
        tag = ", polynomial, certified" if rel.certified else ""
        out(f"relation {n} (order {rel.order}{tag}):")
        for i, gi in enumerate(rel.g, 1):
            out(f"  F{i}: " + " ".join(str(c) for c in gi))


def _vector_arg(text, label):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"{label}: expected two expressions separated by a comma")
    return tuple(parse_ratfunc(p) for p in parts)


def cmd_automorphism(a, out):
    w = web_of(describe(a.web), a.chart)
    v = _vector_arg(a.field, "--field")
    ok = is_infinitesimal_automorphism(w, v)
    out(f"automorphism: {_b(ok)}")
    if not ok:
        return
    witness = _vector_arg(a.witness, "--witness") if a.witness else None
    E = eigen_polynomial(w, v, witness)
    out(f"eigen_polynomial: {E.poly}")
    out("candidates: " + ", ".join(str(c) for c in E.candidates))
    rep = rank_with_automorphism(w, v)
    dims = rep.details["eigen_dimensions"]
    out(f"rank: {rep.rank_estimate}")
    out("eigen_dimensions: " + ", ".join(f"{lam}:{n}" for lam, n in sorted(dims.items())))
    if "superposed_rank" in rep.details:
        holds = rep.details["superposition_identity"]
        out(f"superposed_rank: {rep.details['superposed_rank']} (rank + k - 1 {'holds' if holds else 'fails'})")


def cmd_linearize(a, out):
    d = describe(a.web)
    chart, w, verdict = linearize_verdict(d, a.chart)
    if chart:
        out(f"chart: x + {chart}*y")
    out(f"linear: {_b(is_linear(w))}")
    out(f"linearizable: {_b(verdict.linearizable)}")
    out(f"reason: {verdict.reason}")
    if verdict.ode is not None:
        out(f"ode: {verdict.ode}")


def _implicit_of(d: WebDescription, chart):
    _unsupported(d)
    if d.kind == "implicit":
        if chart:
            raise UsageError("--chart applies to foliation and curve descriptions")
        return to_implicit(d)
    if d.kind == "curve":
        return dual_implicit(curve_of(d, chart))
    return implicit_from_slopes(web_of(d, chart))


def cmd_implicit(a, out):
    W = _implicit_of(describe(a.web), a.chart)
    out(f"slope_polynomial: {W.slope_poly}")
    out(f"degree_in_p: {W.k}")


def cmd_discriminant(a, out):
    rep = discriminant_web(_implicit_of(describe(a.web), a.chart))
    out(f"discriminant: {poly_str(rep.poly)}")
    out(f"degree: {total_degree(rep.poly)}")
    out(f"reduced: {poly_str(rep.squarefree)}")


def cmd_tangency(a, out):
    W1 = _implicit_of(describe(a.first), a.chart)
    W2 = _implicit_of(describe(a.second), a.chart)
    out(f"tangency: {poly_str(tangency(W1, W2))}")


def cmd_dual(a, out):
    d = describe(a.web)
    _unsupported(d)
    C = curve_of(d, a.chart)
    W = dual_implicit(C)
    out(f"curve: {C}")
    out(f"degree: {C.k}")
    out(f"slope_polynomial: {W.slope_poly}")
    out(f"discriminant_degree: {total_degree(dual_discriminant(C))}")
    line = find_splitting_line(C) or find_splitting_line(C, avoid_poles=False)
    out(f"splitting_line: {_pt(line) if line else 'none found over Q'}")
    try:
        w = dual_web_of_lines(C)
        out(f"dual_web: {w}")
    except MathRefusal:
        pass


def cmd_trace(a, out):
    d = describe(a.web)
    _unsupported(d)
    C = curve_of(d, a.chart)
    system = branch_jets(C, order=a.order + 1, numeric=a.numeric)
    out(f"base_line: {_pt(system.base)}" + (" [numeric]" if system.numeric else ""))
    if a.numerator:
        num = parse_ratfunc(a.numerator)
        if not num.is_polynomial():
            raise UsageError("--numerator must be a polynomial")
        forms = [AbelianDifferential(num.num)]
    else:
        forms = abelian_basis(C)
        if not forms:
            out("abelian_basis: empty (genus 0)")
    for omega in forms:
        tr = trace_form(C, omega, system)
        zero = trace_vanishes(tr, system.tol)
        out(f"trace of {omega}: {'zero to order ' + str(tr.order) if zero else 'nonzero'}")


def cmd_abelian_check(a, out):
    d = describe(a.web)
    _unsupported(d)
    (value,) = abelian_answers(d, [a.form]).values()
    out(_b(value))


def _point(text):
    parts = text.split(":")
    try:
        return tuple(to_rational(parse_ratfunc(p).constant()) for p in parts)
    except ValueError as exc:
        raise UsageError(f"bad point {text!r}: {exc}") from None


def cmd_castelnuovo(a, out):
    if a.action == "pi":
        if len(a.args) != 2:
            raise UsageError("castelnuovo pi N K")
        try:
            n, k = (int(v) for v in a.args)
        except ValueError:
            raise UsageError("castelnuovo pi takes two integers") from None
        out(str(pi(n, k)))
        return
    points = [_point(p) for p in a.args]
    if a.action == "steiner":
        out(f"curve: {steiner_rnc(points)}")
        return
    res = castelnuovo_rnc(points)
    out(f"conditions_on_quadrics: {res.conditions}")
    if res.curve is None:
        raise MathRefusal(res.refusal)
    out(f"curve: {res.curve}")


def _check_lines(name: str) -> tuple:
    """One line per expected value of a catalog entry, and whether all matched."""
    d = catalog.entry(name)
    lines, ok = [], True
    if d.kind == "unsupported":
        return [f"{name}: unsupported ({d.unsupported})"], True
    cache = {}

    def got(key, want):
        if key in ("rank", "mihaileanu_zero"):
            if "rank" not in cache:
                cache["rank"] = rank_report(d)[0]
            rep = cache["rank"]
            return rep.rank_estimate if key == "rank" else rep.mihaileanu_zero
        if key == "hexagonal":
            return hexagonal_of(d) == "true"
        if key == "linearizable":
            return linearize_verdict(d)[2].linearizable
        if key == "discriminant_degree":
            return discriminant_degree(d)
        if key == "abelian":
            return abelian_answers(d, list(want))
        raise KeyError(f"no check for {key!r}")

    for key, expectation in d.expected.items():
        want = expectation["value"]
        try:
            value = got(key, want)
        except MathRefusal as exc:
            value = f"refused ({exc})"
        good = value == want
        ok &= good
        lines.append(f"{name} {key}: {_json_value(value)} (expected {_json_value(want)}, {expectation['source']}) "
                     f"{'PASS' if good else 'FAIL'}")
    return lines, ok


def _json_value(v) -> str:
    if isinstance(v, bool):
        return _b(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_json_value(x)}" for k, x in v.items()) + "}"
    return str(v)


def cmd_catalog(a, out):
    if a.action == "list":
        for name in catalog.names():
            d = catalog.entry(name)
            what = f"unsupported: {d.unsupported}" if d.kind == "unsupported" else d.kind
            if d.kind == "foliations":
                what += f" ({len(d.payload)})"
            out(f"{name}: {what}")
        return
    if a.action == "show":
        if len(a.names) != 1:
            raise UsageError("catalog show NAME")
        out(_entry(a.names[0]).dumps().rstrip("\n"))
        return
    if a.action == "write":
        if len(a.names) != 1:
            raise UsageError("catalog write DIRECTORY")
        os.makedirs(a.names[0], exist_ok=True)
        for name in catalog.names():
            path = os.path.join(a.names[0], f"{name}.web")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(catalog.entry(name).dumps())
            out(path)
        return
    names = a.names or catalog.names()
    all_ok = True
    for name in names:
        lines, ok = _check_lines(_entry(name).name)
        all_ok &= ok
        for line in lines:
            out(line)
    if not all_ok:
        raise MathRefusal("some catalog values were not reproduced")


def _entry(name):
    try:
        return catalog.entry(name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def _pair(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected two comma separated rationals, got {text!r}")
    try:
        return tuple(parse_ratfunc(p).constant() for p in parts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_plot(a, out):
    d = describe(a.web)
    _unsupported(d)
    if d.kind == "implicit":
        web = to_implicit(d)
    else:
        web = web_of(d, a.chart)
    parts = a.region.split(",")
    if len(parts) != 4:
        raise UsageError("--region x0,x1,y0,y1")
    region = [parse_ratfunc(p).constant() for p in parts]
    svg = plot(web, region, a.resolution, a.shade)
    if a.output:
        with open(a.output, "w", encoding="utf-8") as fh:
            fh.write(svg)
        out(a.output)
    else:
        sys.stdout.write(svg)


# --- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--chart", type=_chart, default=None, metavar="C",
                        help="pull back along (x, y) -> (x + C y, y) first")
    p = _Parser(prog="webgeom", description="Exact computations on planar webs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_text, web=True):
        s = sub.add_parser(name, parents=[common], help=help_text)
        if web:
            s.add_argument("web", help="a .web file or a catalog name")
        s.set_defaults(fn=fn)
        return s

    add("info", cmd_info, "summary of a web description")
    s = add("curvature", cmd_curvature, "Blaschke curvature of a 3-web, Mihaileanu curvature otherwise")
    s.add_argument("--at", help="evaluate at x,y")
    add("hexagonal", cmd_hexagonal, "whether every 3-subweb has zero curvature")
    s = add("holonomy", cmd_holonomy, "holonomy germ of a 3-web")
    s.add_argument("--order", type=int, default=3)
    s.add_argument("--foliations", help="three indices i,j,l of a k-web")
    for name, fn, text in (("rank", cmd_rank, "jet estimate of the rank"),
                           ("relations", cmd_relations, "basis of the abelian relations")):
        s = add(name, fn, text)
        s.add_argument("--nmax", type=int)
        s.add_argument("--window", type=int)
        if name == "rank":
            s.add_argument("--numeric", action="store_true", help="allow complex branches for curves")
        else:
            s.set_defaults(numeric=False)
    s = add("automorphism", cmd_automorphism, "eigen-decomposition under an infinitesimal automorphism")
    s.add_argument("--field", required=True, help="vector field P,Q meaning P d/dx + Q d/dy")
    s.add_argument("--witness", help="auxiliary vector field for the eigen polynomial")
    add("linearize", cmd_linearize, "linearity and linearizability (k >= 4)")
    add("implicit", cmd_implicit, "slope polynomial of a web")
    add("discriminant", cmd_discriminant, "discriminant of the slope polynomial")
    s = add("tangency", cmd_tangency, "tangency divisor of two webs", web=False)
    s.add_argument("first")
    s.add_argument("second")
    add("dual", cmd_dual, "the web dual to a plane curve")
    s = add("trace", cmd_trace, "traces of differentials on a plane curve")
    s.add_argument("--numerator", help="polynomial p in p dx / F_y; default: the abelian basis")
    s.add_argument("--order", type=int, default=8)
    s.add_argument("--numeric", action="store_true")
    s = add("abelian-check", cmd_abelian_check, "whether q(t) dt is abelian on a parametrized curve")
    s.add_argument("--form", required=True, help="q(t)")
    s = add("castelnuovo", cmd_castelnuovo, "Castelnuovo numbers and rational normal curves", web=False)
    s.add_argument("action", choices=("pi", "steiner", "rnc"))
    s.add_argument("args", nargs="*", help="N K for pi; homogeneous points a:b:c for the others")
    s = add("catalog", cmd_catalog, "named webs", web=False)
    s.add_argument("action", nargs="?", default="list", choices=("list", "show", "check", "write"))
    s.add_argument("names", nargs="*")
    s = add("plot", cmd_plot, "SVG drawing of the leaves")
    s.add_argument("--region", default="-1,1,-1,1")
    s.add_argument("--resolution", type=int, default=40)
    s.add_argument("--shade", action="store_true", help="shade where the discriminant is negative")
    s.add_argument("-o", "--output")
    return p


def _chart(text):
    try:
        return parse_ratfunc(text).constant()
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def out(line):
        stdout.write(line + "\n")

    try:
        args = build_parser().parse_args(argv)
        args.fn(args, out)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return 1
    except (FormatError, ParseError) as exc:
        stderr.write(f"input error: {exc}\n")
        return 1
    except MathRefusal as exc:
        stderr.write(f"refused: {exc}\n")
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        stderr.write(f"refused: {exc}\n")
        return 2
    return 0


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
