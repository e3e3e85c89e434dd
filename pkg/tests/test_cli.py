import json
import subprocess
import sys
from fractions import Fraction

import pytest

from braidslice import catalogue
from braidslice.cli import TEXT_WIDTH, emit, format_matrix, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, "--json", *argv)
    return code, json.loads(out)


def test_emit_is_deterministic():
    rep = {"b": [Fraction(1, 2), 3], "a": {"y": True, "x": ["a1", "a12"]}, "ok": True}
    again = dict(reversed(list(rep.items())))
    assert emit(rep) == emit(again)
    assert emit(rep, "json") == emit(again, "json")
    assert json.loads(emit(rep, "json"))["b"] == ["1/2", 3]
    assert "x: {a1, a12}" in emit(rep)
    with pytest.raises(ValueError):
        emit(rep, "yaml")


def test_text_lines_are_clipped():
    rep = {"long": ["a1"] * 80, "ok": True}
    assert all(len(line) <= TEXT_WIDTH for line in emit(rep).splitlines())


def test_format_matrix():
    assert format_matrix([[Fraction(1, 3), 0], [2, -1]]) == "[ 1/3    0 ]\n[   2   -1 ]"


def test_weyl_command(capsys):
    code, rep = run_json(capsys, "weyl", "--type", "B3", "--w", "1 2 3 1 2")
    assert code == 0 and rep["convex"] is True and rep["length"] == 5
    code, rep = run_json(capsys, "weyl", "--type", "A3", "--w", "321")
    assert rep["elliptic"] and rep["stable_roots"] == []


def test_global_flags_before_command(capsys):
    code, out = run(capsys, "--json", "--type", "A2", "--w", "1 2", "weyl")
    assert code == 0 and json.loads(out)["length"] == 2


def test_dgn_command(capsys):
    code, rep = run_json(capsys, "dgn", "--type", "A3", "--w", "321", "--power", "3")
    # the DG factor is the rightmost one
    assert code == 0 and rep["factors"] == ["2 3 2", "1 2 3 1 2 1"]
    code, rep = run_json(capsys, "dgn", "--type", "B3", "--w", "12312", "--power", "4")
    assert rep["already_normal"] is True


def test_cross_command(capsys):
    code, rep = run_json(capsys, "cross", "--type", "B2", "--w", "1 2", "--set", "{a1}")
    assert code == 0 and sorted(rep["cross"]) == ["a122", "a2"]
    code, rep = run_json(capsys, "cross", "--type", "B2", "--w", "2", "--set", "{a1}", "--big")
    assert code == 1 and "error" in rep


def test_pairs_command(capsys):
    code, rep = run_json(capsys, "pairs", "--type", "B2", "--w", "2", "--N", "{a1, a2}")
    assert code == 1 and rep["failed"]
    code, rep = run_json(capsys, "pairs", "--type", "A3", "--w", "321", "--N", "R+")
    assert code == 0 and rep["crossing_pair"] and rep["crossing_condition"]


def test_rootsys_command(capsys):
    code, rep = run_json(capsys, "rootsys", "--type", "G2", "--convex", "{a1, a11122}")
    assert code == 0 and rep["positive_roots"] == 6
    assert rep["convex"] is True and rep["ray_convex"] is False


def test_survey_b2(capsys):
    code, rep = run_json(capsys, "survey", "--type", "B2")
    assert code == 0 and rep["count"] == 8 and len(rep["rows"]) == 8
    e = next(r for r in rep["rows"] if r["w"] == "")
    assert e["convex"] and e["braid_equation"] is True
    code, out = run(capsys, "survey", "--type", "B2")
    assert out.splitlines()[0] == "B2: 8 elements"
    assert all(len(line) <= TEXT_WIDTH for line in out.splitlines())


def test_survey_a3_coxeter(capsys):
    code, rep = run_json(capsys, "survey", "--type", "A3")
    row = next(r for r in rep["rows"] if r["w"] == "3 2 1")
    assert row["convex"] and row["elliptic"] and len(row["dg_stabilized"].split()) == 6


def test_rmatrix_reduction_holds(capsys):
    code, rep = run_json(capsys, "rmatrix", "check", "--algebra", "sl3", "--r0", "cayley", "--w", "1 2 1",
                         "--expect-reduction")
    assert code == 0 and rep["mcybe"] is True
    assert all(rep["conditions"].values())
    code, rep = run_json(capsys, "rmatrix", "check", "--algebra", "sl3", "--r0", "1 -2;2 -1", "--w", "1 2 1",
                         "--expect-reduction")
    assert code == 1 and rep["reduction_by_conditions"] is False and rep["reduction_by_image"] is False


def test_rmatrix_triple_and_cayley_conflict(capsys):
    # the triple 1>2 forces r0 != 0, while reduction for w0 forces r0 = 0
    code, rep = run_json(capsys, "rmatrix", "check", "--algebra", "sl3", "--triple", "1>2", "--r0", "cayley",
                         "--w", "1 2 1")
    assert code == 1 and rep["torus_constraint"] is False and rep["errors"] == ["alpha1 -> alpha2"]
    assert all(rep["conditions"].values())
    code, rep = run_json(capsys, "rmatrix", "check", "--algebra", "sl3", "--triple", "1>2", "--r0", "solve",
                         "--w", "1 2 1")
    assert rep["mcybe"] is True and rep["reduction_by_conditions"] is False


def test_slice_commands(capsys):
    code, rep = run_json(capsys, "slice", "verify", "--group", "SL3", "--w", "2 1", "--samples", "5")
    assert code == 0 and rep["psi_inverse_psi"] == 5
    code, rep = run_json(capsys, "slice", "closed-form", "--samples", "5")
    assert code == 0 and rep["matches"] == 5
    code, rep = run_json(capsys, "slice", "transversality", "--group", "SL3", "--w", "1 2 1", "--pair", "firm",
                         "--torus", "fixed", "--samples", "3")
    assert code == 0 and rep["ranks"] == [8]
    code, rep = run_json(capsys, "slice", "spaltenstein", "--samples", "3")
    assert code == 0 and all(r["witness"] for r in rep["samples"])


def test_slice_reports_failed_crossing(capsys):
    code, rep = run_json(capsys, "slice", "verify", "--group", "SL6", "--w", "1 2 3 4 5 3 4 1 2",
                         "--samples", "2")
    assert code == 1


def test_example_command_by_id(capsys):
    code, rep = run_json(capsys, "paper-example", "b3-dg-square")
    assert code == 0 and rep["status"] == "pass"
    code, rep = run_json(capsys, "paper-example", "b3-inverse-dgn")
    assert code == 1 and rep["status"] == "fail" and "note" in rep
    code, rep = run_json(capsys, "paper-example", "no-such-example")
    assert code == 1 and "unknown example id" in rep["error"]
    code, rep = run_json(capsys, "paper-example", "--list")
    assert code == 0 and rep["ids"] == [r.id for r in catalogue.RECORDS]


def test_example_command_all(capsys):
    code, rep = run_json(capsys, "paper-example", "--all")
    failing = [r["id"] for r in rep["results"] if r["status"] != "pass"]
    assert failing == ["b3-inverse-dgn"]
    assert code == 1 and rep["passed"] == rep["total"] - 1


def test_run_example_deterministic():
    a = catalogue.run_example("sl3-closed-form", seed=3)
    b = catalogue.run_example("sl3-closed-form", seed=3)
    assert a == b and a["status"] == "pass"


def test_bad_input_is_reported(capsys):
    code, rep = run_json(capsys, "weyl", "--type", "Q7", "--w", "1")
    assert code == 1 and "error" in rep
    code, rep = run_json(capsys, "weyl", "--type", "A2", "--w", "3")
    assert code == 1


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "braidslice.cli", "--json", "weyl", "--type", "A1", "--w", "1"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["length"] == 1
