import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webgeom.algebra import RatFunc
from webgeom.cli import catalog
from webgeom.cli.main import run
from webgeom.cli.parser import Bin, Neg, Num, ParseError, Pow, Var, evaluate, parse, parse_ratfunc, to_text
from webgeom.cli.plot import plot
from webgeom.cli.webfile import FormatError, from_json, load, loads, to_implicit, to_web
from webgeom.webmodel import make_web

x, y = RatFunc.x(), RatFunc.y()


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


# --- expression syntax -------------------------------------------------------

leaves = st.one_of(st.builds(Num, st.integers(0, 50)), st.sampled_from([Var("x"), Var("y")]))
trees = st.recursive(
    leaves,
    lambda sub: st.one_of(
        st.builds(Neg, sub),
        st.builds(Bin, st.sampled_from("+-*/"), sub, sub),
        st.builds(Pow, sub, st.integers(0, 4)),
    ),
    max_leaves=12,
)


@settings(max_examples=1000, deadline=None)
@given(trees)
def test_print_parse_round_trip(tree):
    assert parse(to_text(tree)) == tree


@settings(max_examples=100, deadline=None)
@given(trees)
def test_printed_ratfunc_parses_back(tree):
    try:
        f = evaluate(tree)
    except ZeroDivisionError:
        return
    assert parse_ratfunc(str(f)) == f


def test_unary_minus_binds_looser_than_power():
    assert parse("-x^2") == Neg(Pow(Var("x"), 2))
    assert parse_ratfunc("-x^2") == -(x**2)


@pytest.mark.parametrize(
    "text,column",
    [("x^(1/2)", 5), ("x^-1", 3), ("2x", 2), ("x +", 4), ("z", 1), ("x^2^3", 4), ("x $ y", 3), ("", 1)],
)
def test_parse_errors_report_the_column(text, column):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert f"at column {column}" in str(info.value)


# --- the .web format ---------------------------------------------------------


def test_web_file_builds_a_web():
    d = loads(json.dumps({"foliations": [{"first_integral": "x"}, {"slope": "oo"}, {"closed_form": {"dx": "y", "dy": "x"}}],
                          "base_point": ["1/2", "1"]}))
    w = to_web(d)
    assert w.k == 3 and w.base == (1 / RatFunc(2)(0, 0), 1)


@pytest.mark.parametrize(
    "data",
    [
        {"foliations": [{"first_integral": "x"}, {"first_integral": "y"}], "colour": "red"},
        {"foliations": [{"first_integral": "x"}]},
        {"foliations": [{"first_integral": "x"}, {"first_integral": "y"}], "curve": "x"},
        {"foliations": [{"integral": "x"}, {"first_integral": "y"}]},
        {"foliations": [{"first_integral": "x"}, {"first_integral": "y"}], "base_point": [0.5, 1]},
        {"foliations": [{"first_integral": "x"}, {"first_integral": "z"}]},
        {"curve": "x*y", "variables": ["x", "p"]},
        {"curve": "x*y", "singular_fibers": [["0"]]},
        [],
    ],
)
def test_strict_format_rejects(data):
    with pytest.raises(FormatError):
        from_json(data)


def test_invalid_json_is_a_format_error():
    with pytest.raises(FormatError):
        loads("{not json")


def test_p_may_not_appear_in_a_denominator():
    with pytest.raises(FormatError):
        to_implicit(loads('{"implicit": "1/p - x"}'))


def test_custom_variable_names():
    d = loads('{"variables": ["u", "v"], "foliations": [{"first_integral": "u"}, {"first_integral": "u+v"}]}')
    assert [f.data[0] for f in to_web(d).foliations] == [x, x + y]


# --- exit codes --------------------------------------------------------------


def test_successful_command():
    code, out, _ = cli("castelnuovo", "pi", "2", "9")
    assert code == 0 and out.strip() == "28"


def test_usage_errors_exit_with_one():
    assert cli()[0] == 1
    assert cli("rank")[0] == 1
    assert cli("info", "no_such_web")[0] == 1


def test_refusals_exit_with_two():
    code, _, err = cli("info", "h5")
    assert code == 2 and err


def test_file_arguments(tmp_path):
    path = tmp_path / "w.web"
    path.write_text('{"foliations": [{"first_integral": "x"}, {"first_integral": "y"}, {"first_integral": "x*y"}]}')
    code, out, _ = cli("hexagonal", str(path))
    assert code == 0 and out.strip() == "true"
    path.write_text('{"foliations": [')
    assert cli("hexagonal", str(path))[0] == 1


def test_curvature_command():
    code, out, _ = cli("curvature", "w1", "--at", "1,2")
    assert code == 0 and out


# --- drawing -----------------------------------------------------------------


def test_plot_is_byte_deterministic():
    w = to_web(catalog.entry("bol5"))
    a = plot(w, resolution=20)
    b = plot(w, resolution=20)
    assert a == b
    assert a.startswith('<?xml version="1.0" encoding="UTF-8"?>\n<svg')
    assert a.count("<path") == 5


def test_plot_of_slope_field_is_deterministic():
    from webgeom.webmodel import Foliation
    w = make_web(Foliation.slope(x * x), Foliation.slope(-y), base=(1, 1))
    assert plot(w, resolution=12) == plot(w, resolution=12)


def test_fold_has_no_leaves_left_of_the_axis():
    svg = plot(to_implicit(catalog.entry("fold2")), resolution=20, shade=True)
    path = next(line for line in svg.splitlines() if line.startswith("<path"))
    xs = [float(tok.split()[0]) for part in path.split('d="')[1].split('"')[0].split("M")[1:]
          for tok in part.split("L")]
    assert xs and min(xs) >= 200 - 1e-9  # pixel 200 is x = 0
    assert svg.count('fill="#e0e0e0"') == 20


def test_plot_command_writes_file(tmp_path):
    out = tmp_path / "b.svg"
    code, _, _ = cli("plot", "parallel4", "--resolution", "10", "-o", str(out))
    assert code == 0 and out.read_text().endswith("</svg>\n")


# --- catalog -----------------------------------------------------------------


def test_catalog_entries_round_trip_through_files(tmp_path):
    code, _, _ = cli("catalog", "write", str(tmp_path))
    assert code == 0
    for name in catalog.names():
        d = load(tmp_path / f"{name}.web")
        assert d.dumps() == catalog.entry(name).dumps()


def test_catalog_sources_are_machine_readable():
    for name in catalog.names():
        for value in catalog.entry(name).expected.values():
            assert value["source"] in (catalog.LITERATURE, catalog.COMPUTED)


def test_catalog_check_subset():
    code, out, _ = cli("catalog", "check", "parallel4", "lines3")
    assert code == 0
    assert "FAIL" not in out and out.count("PASS") == 5
