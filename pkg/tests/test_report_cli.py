import csv
import io
import json

import numpy as np
import pytest

from varlex.cli import run_cli
from varlex.core import Box, GridFunction, grid_function_to_json
from varlex.report import (
    CSV_COLUMNS,
    ExperimentReport,
    make_environment,
    merge_reports,
    report_from_json,
)


def _sample_report():
    rep = ExperimentReport(
        "demo", environment=make_environment(3, [64], "numpy")
    )
    rep.check("a", "loc-a", True, lhs=1.0, rhs=2.0, ratio=0.5, tolerance=1e-9, grid=64)
    rep.record("b", "loc-b", lhs=0.7, grid=64)
    rep.estimates["c_hat"] = 0.7
    return rep


def test_report_roundtrip_and_csv():
    rep = _sample_report()
    d = json.loads(rep.json_bytes())
    assert d["schema"] == "varlex-report/1"
    back = report_from_json(d)
    assert back.suite == "demo"
    assert back.passed

    rows = list(csv.reader(io.StringIO(rep.csv_text())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1][0] == "demo" and rows[1][3] == "pass"
    assert rows[2][3] == "recorded"

    with pytest.raises(ValueError):
        report_from_json({"schema": "other/9", "suite": "x"})


def test_determinism_hash_ignores_timestamp():
    a = _sample_report()
    b = _sample_report()
    assert a.environment["timestamp"] != "" and b.environment["timestamp"] != ""
    b.environment["timestamp"] = "2099-01-01T00:00:00+00:00"
    assert a.determinism_hash() == b.determinism_hash()
    b.checks[0].lhs = 1.5
    assert a.determinism_hash() != b.determinism_hash()


def test_failed_check_flips_exit_semantics():
    rep = _sample_report()
    rep.check("bad", "loc-bad", False, lhs=3.0, rhs=1.0)
    assert not rep.passed


def test_skip_guard():
    rep = ExperimentReport("s")
    rep.skip(count=3, total=3)
    rep.count_trial()
    rep.finalize_skips()
    assert not rep.passed  # 3 of 4 skipped


def test_merge_reports():
    a = _sample_report()
    b = _sample_report()
    b.suite = "other"
    merged = merge_reports([a, b])
    assert len(merged.checks) == 4
    assert "demo/c_hat" in merged.estimates and "other/c_hat" in merged.estimates


@pytest.fixture()
def grid_files(tmp_path):
    box = Box.line(0, 1, 32)
    rng = np.random.default_rng(0)
    f = GridFunction(box, rng.normal(0, 1, 32))
    p = GridFunction(box, np.full(32, 2.0))
    fpath = tmp_path / "f.json"
    ppath = tmp_path / "p.json"
    fpath.write_text(json.dumps(grid_function_to_json(f)))
    ppath.write_text(json.dumps(grid_function_to_json(p)))
    return fpath, ppath, f


def test_cli_norm(grid_files, capsys):
    fpath, ppath, f = grid_files
    code = run_cli(
        ["norm", "--space", "luxemburg", "-f", str(fpath), "-p", str(ppath)]
    )
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    classic = float(np.sqrt((f.values**2 * (1 / 32)).sum()))
    assert out["value"] == pytest.approx(classic, rel=1e-10)
    assert out["residual"] <= 1e-12


def test_cli_maximal_and_transform(grid_files, capsys):
    fpath, _, f = grid_files
    assert run_cli(["maximal", "--op", "M", "-f", str(fpath)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["values"]) == 32
    assert np.all(np.asarray(out["values"]) >= np.abs(f.values) - 1e-13)

    assert run_cli(["maximal", "--op", "bmo", "-f", str(fpath)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["bmo_norm"] > 0

    assert run_cli(["transform", "--kernel", "hilbert", "-f", str(fpath)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["values"]) == 32

    code = run_cli(
        [
            "transform",
            "--kernel",
            "hilbert",
            "-f",
            str(fpath),
            "--commutator",
            str(fpath),
        ]
    )
    assert code == 0


def test_cli_transform_2d(tmp_path, capsys, kernels_warm):
    box = Box(((-1.0, 1.0), (-1.0, 1.0)), (8, 8))
    rng = np.random.default_rng(5)
    f = GridFunction(box, rng.normal(0, 1, 64))
    path = tmp_path / "f2.json"
    path.write_text(json.dumps(grid_function_to_json(f)))
    assert run_cli(["transform", "--kernel", "riesz1", "-f", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["box"]["dim"] == 2 and len(out["values"]) == 64
    assert run_cli(["maximal", "--op", "localsharp", "-f", str(path), "--lambda", "0.4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["values"]) == 64


def test_cli_bad_inputs(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    assert (
        run_cli(["norm", "--space", "orlicz", "-f", str(missing), "-p", str(missing)])
        == 2
    )
    bad = tmp_path / "bad.json"
    bad.write_text('{"box": {"dim": 1, "bounds": [[0, 1]], "cells": [4]}, "values": [1, 2]}')
    assert run_cli(["maximal", "--op", "M", "-f", str(bad)]) == 2
    capsys.readouterr()


def test_cli_verify_and_merge(tmp_path, capsys):
    code = run_cli(
        [
            "verify",
            "pointwise",
            "--seed",
            "5",
            "--sizes",
            "64",
            "--trials",
            "5",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "[PASS" in out
    jpath = tmp_path / "pointwise.json"
    assert jpath.exists() and (tmp_path / "pointwise.csv").exists()
    data = json.loads(jpath.read_text())
    assert data["schema"] == "varlex-report/1"
    assert all(c["status"] != "fail" for c in data["checks"])

    code = run_cli(
        ["report", "merge", str(jpath), str(jpath), "--out", str(tmp_path)]
    )
    assert code == 0
    capsys.readouterr()
    merged = json.loads((tmp_path / "merged.json").read_text())
    assert len(merged["checks"]) == 2 * len(data["checks"])


def test_cli_exit_one_on_failed_checks(tmp_path, capsys):
    rep = _sample_report()
    rep.check("bad", "loc-bad", False, lhs=3.0, rhs=1.0)
    path = tmp_path / "failing.json"
    path.write_bytes(rep.json_bytes())
    code = run_cli(["report", "merge", str(path), "--out", str(tmp_path)])
    assert code == 1
    capsys.readouterr()


def test_cli_estimate(tmp_path, capsys):
    code = run_cli(
        [
            "estimate",
            "lerner",
            "--seed",
            "2",
            "--sizes",
            "64",
            "128",
            "--trials",
            "6",
            "--lambda",
            "0.5",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "lerner_c_hat" in out
    data = json.loads((tmp_path / "lerner.json").read_text())
    assert "lerner_c_hat" in data["estimates"]
    # estimates are recorded, not asserted
    assert all(c["status"] in ("recorded", "pass") for c in data["checks"])
