"""Driver pipeline: spec validation, reports, sweeps, exit codes."""

import json
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest

from ncspheres import cli
from ncspheres.cli import (CATALOG, RunSpec, canonical_json, main, run, sweep,
                           sweep_csv)
from ncspheres.errors import InvalidSpec, ParamsNotOnSphere, TaskFailure
from ncspheres.rmatrix import DeformParams
from ncspheres.scalars import EXACT, GaussRational


def _spec(label="3/5,4/5,0", tasks=("conditions",), **kw):
    return RunSpec(params=DeformParams.parse(label), tasks=tasks, **kw)


def test_spec_validation_rejects_bad_input():
    with pytest.raises(InvalidSpec):
        _spec(tasks=()).validate()
    with pytest.raises(InvalidSpec):
        _spec(tasks=("conditions", "frobnicate")).validate()
    with pytest.raises(InvalidSpec):
        _spec(backend_name="quantum").validate()
    with pytest.raises(InvalidSpec):
        _spec(degree_cap=3).validate()
    with pytest.raises(ParamsNotOnSphere):
        _spec("1/2,0,0").validate()


def test_closure_adds_prerequisites():
    assert _spec(tasks=("coaction",)).closure() == \
        ("conditions", "algebra", "sphere", "coaction")
    assert _spec(tasks=("chern",)).closure() == \
        ("conditions", "algebra", "sphere", "chern")
    assert _spec(tasks=("conditions",)).closure() == ("conditions",)


def test_exact_run_reports_are_byte_identical():
    spec = _spec(tasks=("conditions", "algebra"))
    r1, _ = run(spec)
    r2, _ = run(_spec(tasks=("conditions", "algebra")))
    assert r1["passed"]
    assert canonical_json(r1) == canonical_json(r2)
    assert r1["spec"]["params"] == "3/5,4/5,0"
    assert r1["spec"]["tasks"] == ["conditions", "algebra"]


def test_canonical_json_renders_exact_scalars():
    blob = {"g": GaussRational(Fraction(-7, 25), Fraction(24, 25)),
            "f": Fraction(3, 5), "z": complex(0.5, -1.0)}
    back = json.loads(canonical_json(blob))
    assert back["g"] == "(-7/25,24/25)"
    assert back["f"] == "3/5"
    assert back["z"] == [0.5, -1.0]


def test_failing_task_skips_downstream(monkeypatch):
    def boom(spec, state):
        raise TaskFailure("algebra", "forced failure")

    monkeypatch.setitem(cli._TASK_FNS, "algebra", boom)
    report, _ = run(_spec(tasks=("sphere",)))
    assert not report["passed"]
    assert report["tasks"]["conditions"]["passed"]
    assert report["tasks"]["algebra"]["error"]["detail"] == "forced failure"
    assert report["tasks"]["sphere"] == {
        "skipped": True, "reason": "prerequisite 'algebra' failed"}


def test_sweep_needs_points():
    with pytest.raises(InvalidSpec):
        sweep([])


def test_sweep_preserves_order_and_flags():
    points = [DeformParams.parse("1,0,0"), DeformParams.parse("3/5,4/5,0")]
    results = sweep(points, tasks=("sphere",))
    assert all(r["passed"] for r, _ in results)
    assert [r["spec"]["params"] for r, _ in results] == ["1,0,0", "3/5,4/5,0"]
    csv = sweep_csv(points, results)
    lines = csv.strip().split("\n")
    assert lines[0] == "point,commutative,conditions,algebra,sphere,theta"
    assert lines[1].startswith('"1,0,0",commutative,pass,pass,pass')
    assert lines[2].startswith('"3/5,4/5,0",,pass,pass,pass')
    assert '"(-7/25,24/25)"' in lines[2]


def test_main_exit_codes(capsys):
    assert main(["check", "--quiet"]) == 0
    assert main(["check", "--backend", "float", "--quiet"]) == 0
    assert main(["check", "--params", "frog"]) == 2
    assert main(["check", "--params", "1/2,0,0"]) == 2
    capsys.readouterr()


def test_main_returns_one_on_task_failure(monkeypatch, capsys):
    monkeypatch.setitem(
        cli._TASK_FNS, "conditions",
        lambda spec, state: {"passed": False, "error": {"detail": "nope"}})
    assert main(["check", "--quiet"]) == 1
    capsys.readouterr()


def test_json_report_validates_against_schema(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["sphere", "--quiet", "--json", str(out)]) == 0
    capsys.readouterr()
    text = out.read_text()
    report = json.loads(text)
    schema = json.loads(resources.files("ncspheres")
                        .joinpath("schema/run_report.schema.json")
                        .read_text())
    jsonschema.validate(report, schema)
    # canonical: sorted keys, trailing newline
    assert text == canonical_json(report)
    assert set(report["tasks"]) == {"conditions", "algebra", "sphere"}


def test_catalog_points_sit_on_the_sphere():
    for label in CATALOG:
        DeformParams.parse(label).validate(EXACT)
