from __future__ import annotations

import json
from pathlib import Path

import pytest

from valgraph.cli import main, run_analyses
from valgraph.errors import SpecInvalid
from valgraph.specfile import load_spec, parse_spec

SPECS = Path(__file__).resolve().parents[1] / "demos" / "specs"


def _run(tmp_path, spec, analysis, *extra):
    out = tmp_path / f"{Path(spec).stem}-{analysis}"
    code = main([analysis, "--spec", str(spec), "--out", str(out), *extra])
    return code, out


def test_quaternion_graph_exit_zero(tmp_path, capsys):
    code, out = _run(tmp_path, SPECS / "quaternion.spec", "graph")
    assert code == 0
    rep = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert rep["schema_version"] == 1 and rep["exit_code"] == 0
    assert rep["analyses"]["graph"]["result"]["diameter"] == 3
    assert "graph:" in capsys.readouterr().out
    assert (out / "graph.dot").read_text(encoding="utf-8").count("[label=") == 35
    assert "graph" in json.loads((out / "timings.json").read_text(encoding="utf-8"))


def test_bad_spec_exit_three(tmp_path, capsys):
    code, _ = _run(tmp_path, SPECS / "bad.spec", "graph")
    assert code == 3
    assert "graph must be one of" in capsys.readouterr().err


def test_missing_spec_and_bad_usage(tmp_path):
    assert _run(tmp_path, tmp_path / "nope.spec", "graph")[0] == 3
    assert main(["dance", "--spec", "x", "--out", "y"]) == 3
    assert _run(tmp_path, SPECS / "ff17.spec", "graph", "--window", "-1")[0] == 3


def test_semilocal_classify_expected_negative(tmp_path):
    code, out = _run(tmp_path, SPECS / "semilocal.spec", "classify")
    assert code == 0
    rep = json.loads((out / "report.json").read_text(encoding="utf-8"))
    res = rep["analyses"]["classify"]["result"]
    assert res["is_valuation_like"] is False
    assert res["witnesses"]["incomparable"]["values"] == [[-2, -1], [-1, -2]]


def test_failing_expectation_exit_one(tmp_path):
    text = (SPECS / "laurent.spec").read_text(encoding="utf-8")
    spec = parse_spec(text.replace("order.expect = total", "order.expect = not-total"))
    report, _, code = run_analyses(spec, "order")
    assert code == 1
    a = report["analyses"]["order"]["assertions"]
    assert any(x["holds"] is False for x in a)


def test_inconclusive_exit_two(tmp_path, capsys):
    # a one-layer window sees no element of positive valuation, so no level can be decided
    code, out = _run(tmp_path, SPECS / "laurent.spec", "classify", "--window", "1")
    assert code == 2
    assert "classify.expect: inconclusive [inconclusive]" in capsys.readouterr().out
    assert _run(tmp_path, SPECS / "laurent.spec", "valuation", "--window", "0")[0] == 2


def test_xy_override(tmp_path):
    code, out = _run(tmp_path, SPECS / "ff17.spec", "order", "--y", "9")
    assert code == 0
    assert "conditions-agree" in (out / "report.json").read_text(encoding="utf-8")


@pytest.mark.parametrize("name", ["kappa", "s3xs3", "ff17", "laurent", "semilocal_diagonal"])
def test_all_analyses_pass(tmp_path, name):
    code, _ = _run(tmp_path, SPECS / f"{name}.spec", "all")
    assert code == 0


def test_reports_byte_stable(tmp_path):
    _, a = _run(tmp_path / "a", SPECS / "kappa.spec", "all")
    _, b = _run(tmp_path / "b", SPECS / "kappa.spec", "all")
    for f in ("report.json", "graph.dot"):
        assert (a / f).read_bytes() == (b / f).read_bytes()
    dot = (a / "graph.dot").read_text(encoding="utf-8")
    assert dot.count("[label=") == 15


# spec parsing --------------------------------------------------------------------------
def test_parse_spec_collects_all_errors():
    text = "model.q = 17\ncolour = red\nwindow = -2\nclassify.expect = maybe\nnonsense\n"
    with pytest.raises(SpecInvalid) as exc:
        parse_spec(text, "t.spec")
    msg = str(exc.value)
    for part in ("t.spec:2", "t.spec:4", "t.spec:5", "model.kind is required", "window"):
        assert part in msg


def test_parse_spec_values():
    spec = parse_spec("model.kind = Quaternion  # comment\nmodel.d = 17\ny = pi\ngraph.expect.diameter = 3\n")
    assert spec.model == {"kind": "Quaternion", "d": 17}
    assert spec.get("y") == "pi" and spec.expect["graph.expect.diameter"] == 3
    assert not spec.abstract
    with pytest.raises(SpecInvalid):
        parse_spec("model.kind = abstract\ngraph = commuting\n")


def test_demo_specs_all_load():
    for p in SPECS.glob("*.spec"):
        if p.stem == "bad":
            with pytest.raises(SpecInvalid):
                load_spec(p)
        else:
            assert load_spec(p).model["kind"]
