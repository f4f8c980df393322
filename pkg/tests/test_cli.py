import csv
import io
import json

import pytest

from odelta.cli import SCHEMA_VERSION, SWEEP_HEADER, main, parse_grid

A_STAR = "2.1796604316786983"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


def test_tstar_prints_constant(capsys):
    code, out, _ = run(capsys, "tstar")
    assert code == 0 and out.strip() == A_STAR


def test_tstar_json(capsys):
    code, d = run_json(capsys, "tstar", "--json")
    assert code == 0 and d["schema_version"] == SCHEMA_VERSION
    assert repr(d["a_star"]) == A_STAR


def test_solve_reports_fields(capsys):
    code, d = run_json(capsys, "solve", "1.5", "2.5")
    assert code == 0
    assert {"a", "b", "t", "rho", "residual_q", "schema_version"} <= set(d)
    assert d["residual_q"] < 1e-10 and d["t"] > 2.5


def test_solve_diagonal(capsys):
    code, d = run_json(capsys, "solve", "2", "2", "--t", "5")
    assert code == 0 and d["rho"] == 1.0 and d["residual_q"] < 1e-10


def test_solve_diagonal_needs_t(capsys):
    code, _, err = run(capsys, "solve", "2", "2")
    assert code == 1 and "--t" in err


def test_solve_swapped(capsys):
    _, ref = run_json(capsys, "solve", "1.5", "2.5")
    code, d = run_json(capsys, "solve", "2.5", "1.5")
    assert code == 0 and "swapped" in d["note"]
    assert d["t"] == ref["t"] and d["rho"] == ref["rho"]


def test_solve_bracket_failure_exit_code(capsys):
    code, d = run_json(capsys, "solve", "1.01", "1.02")
    assert code == 2 and "error" in d and d["samples"]


def test_seventeen_significant_digits(capsys):
    _, out, _ = run(capsys, "solve", "1.5", "2.5")
    t = json.loads(out)["t"]
    assert f'"t": {t:.17g}' in out


def test_malformed_args_exit_one(capsys):
    code, _, err = run(capsys, "solve", "x", "2")
    assert code == 1 and "usage" in err
    assert run(capsys)[0] == 1
    assert run(capsys, "nonsense")[0] == 1


def test_inadmissible_params_exit_one(capsys):
    assert run(capsys, "gauss", "2", "2", "1.5")[0] == 1
    assert run(capsys, "solve", "2", "2", "--t", "1.5")[0] == 1


def test_sweep_grid(capsys):
    code, out, _ = run(capsys, "sweep", "--a-grid", "1.2:2:5", "--b-grid", "2.2:3:5")
    rows = rows_of(out)
    assert code == 0 and rows[0] == SWEEP_HEADER and len(rows) == 26
    for r in rows[1:]:
        assert r[-1] == "ok" and float(r[4]) < 1e-10


def test_sweep_parallel_matches_serial(capsys, monkeypatch):
    args = ("sweep", "--a-grid", "1.2,1.6", "--b-grid", "2.2,3")
    _, serial, _ = run(capsys, *args)
    _, par, _ = run(capsys, *args, "--jobs", "2")
    monkeypatch.setenv("TPMS_JOBS", "2")
    _, env, _ = run(capsys, *args)
    assert serial == par == env


def test_sweep_bad_jobs_env(capsys, monkeypatch):
    monkeypatch.setenv("TPMS_JOBS", "many")
    assert run(capsys, "sweep", "--a-grid", "1.2", "--b-grid", "2")[0] == 1


def test_sweep_diagonal_rows_skipped(capsys):
    _, out, _ = run(capsys, "sweep", "--a-grid", "2", "--b-grid", "2,3")
    rows = rows_of(out)
    assert rows[1][-1] == "skipped: diagonal" and rows[2][-1] == "ok"


def test_sweep_failures_recorded_per_row(capsys):
    code, out, _ = run(capsys, "sweep", "--a-grid", "1.01", "--b-grid", "1.02,2")
    rows = rows_of(out)
    assert code == 0 and rows[1][-1].startswith("failed") and rows[2][-1] == "ok"


def test_sweep_empty_grid_refused(capsys):
    assert run(capsys, "sweep", "--a-grid", "", "--b-grid", "2")[0] == 1
    assert run(capsys, "sweep", "--a-grid", "1:2:1", "--b-grid", "2")[0] == 1


def test_sweep_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--a-grid", "1.2", "--b-grid", "2",
                       "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 1 and "cannot write" in err


def test_sweep_writes_file(capsys, tmp_path):
    out = tmp_path / "s.csv"
    assert run(capsys, "sweep", "--a-grid", "1.2", "--b-grid", "2", "--out", str(out))[0] == 0
    assert rows_of(out.read_text())[0] == SWEEP_HEADER


def test_boundary_table(capsys):
    code, out, _ = run(capsys, "boundary", "--a-grid", f"1.5,{A_STAR},1.015")
    rows = rows_of(out)
    assert code == 0 and rows[0] == ["a", "t", "residual"]
    assert abs(float(rows[2][1]) - float(A_STAR) ** 2) < 1e-8
    assert rows[3][2].startswith("not found")


def test_gauss_meeks(capsys):
    code, d = run_json(capsys, "gauss", "2", "2", "5", "--rho", "1")
    assert code == 0 and d["classification"] == "meeks"
    assert len(d["antipodal_pairs"]) == 4 and len(d["points"]) == 8


def test_gauss_non_meeks(capsys):
    code, d = run_json(capsys, "gauss", "1.5", "2.5", "4")
    assert code == 0 and d["classification"] == "non_meeks"
    assert d["antipodal_pairs"] == [] and d["rho4_discrepancy"] > 1


def test_mesh_single_and_cell(capsys, tmp_path):
    out = tmp_path / "h.ply"
    code, d = run_json(capsys, "mesh", "2", "2", "4", "--resolution", "4", "--out", str(out))
    assert code == 0 and out.exists() and d["vertices"] == 97
    out = tmp_path / "cell.obj"
    code, d = run_json(capsys, "mesh", "1.4142135623730951", "1.4142135623730951", "2",
                       "--copies", "8", "--resolution", "4", "--out", str(out))
    assert code == 0 and d["euler_characteristic"] == -4 and d["weld_residual"] < 1e-8
    assert d["A"] == pytest.approx(d["B"], rel=1e-12)


def test_mesh_unsolved_cell_refused(capsys, tmp_path):
    code, d = run_json(capsys, "mesh", "1.5", "2.5", "6", "--copies", "8",
                       "--resolution", "4", "--out", str(tmp_path / "x.obj"))
    assert code == 2 and d["dx"] > 1e-4


def test_verify_derivatives(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "derivatives")
    assert code == 0 and out.startswith("PASS derivatives")


def test_config_supplies_flags(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"a_grid": "1.2,1.6", "b_grid": "2.2"}))
    code, out, _ = run(capsys, "--config", str(cfg), "sweep")
    assert code == 0 and len(rows_of(out)) == 3


def test_config_flags_win(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"a_grid": "1.2,1.6", "b_grid": "2.2"}))
    code, out, _ = run(capsys, "--config", str(cfg), "sweep", "--a-grid", "1.3")
    rows = rows_of(out)
    assert code == 0 and len(rows) == 2 and rows[1][0] == "1.3"


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "--config", str(bad), "tstar")[0] == 1
    nested = tmp_path / "n.json"
    nested.write_text(json.dumps({"json": {"x": 1}}))
    assert run(capsys, "--config", str(nested), "tstar")[0] == 1
    assert run(capsys, "--config", str(tmp_path / "none.json"), "tstar")[0] == 1


def test_parse_grid():
    assert parse_grid("1:2:3") == [1.0, 1.5, 2.0]
    assert parse_grid("1, 2,3") == [1.0, 2.0, 3.0]


def test_deterministic(capsys):
    first = run(capsys, "solve", "1.5", "2.5")
    assert run(capsys, "solve", "1.5", "2.5") == first
