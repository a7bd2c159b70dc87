"""Command-line interface: subcommands, artifacts, exit codes, config files,
and byte-level determinism of the written outputs."""

import json

import numpy as np
import pytest

from hypflow import cli, serialization


def run_cli(argv):
    return cli.main(argv)


# ---------------------------------------------------------------------------
# flow

def _flow_args(out, extra=()):
    return ["flow", "--scenario", "perturbed-geodesic", "--n", "61",
            "--amplitude", "0.02", "--mode", "1", "--weight", "elastic",
            "--t-max", "inf", "--max-steps", "30", "--out", str(out),
            *extra]


def test_flow_writes_reports_and_figures(tmp_path):
    out = tmp_path / "run"
    assert run_cli(_flow_args(out)) == cli.EXIT_OK
    assert (out / "trajectory.csv").exists()
    assert (out / "curve_initial.csv").exists()
    assert (out / "curve_final.csv").exists()
    assert (out / "manifest.json").exists()
    assert (out / "trajectory.png").stat().st_size > 0
    assert (out / "snapshots.png").stat().st_size > 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["verdict"] == "budget_exhausted"
    assert "final_report" in manifest and "config" in manifest


def test_flow_no_figures(tmp_path):
    out = tmp_path / "run"
    assert run_cli(_flow_args(out, ["--no-figures"])) == cli.EXIT_OK
    assert not (out / "trajectory.png").exists()
    assert (out / "trajectory.csv").exists()


def test_flow_deterministic_outputs(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_cli(_flow_args(out1, ["--no-figures"])) == cli.EXIT_OK
    assert run_cli(_flow_args(out2, ["--no-figures"])) == cli.EXIT_OK
    for name in ("trajectory.csv", "curve_final.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_flow_trajectory_csv_header(tmp_path):
    out = tmp_path / "run"
    run_cli(_flow_args(out, ["--no-figures"]))
    header = (out / "trajectory.csv").read_text().splitlines()[0]
    assert header == "t,elastic,willmore,length,min_height,grad_norm,total_abs_curvature"


# ---------------------------------------------------------------------------
# config files and exit codes

def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# flow settings\n"
        "scenario = perturbed-geodesic\n"
        "n = 61\n"
        "amplitude = 0.02\n"
        "weight = elastic\n"
        "t-max = inf\n"
        "max-steps = 20\n"
    )
    out = tmp_path / "run"
    code = run_cli(["flow", "--config", str(cfg), "--out", str(out),
                    "--no-figures"])
    assert code == cli.EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["max_steps"] == 20


def test_explicit_flag_beats_config_value(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("scenario = perturbed-geodesic\nn = 61\nmax-steps = 20\n"
                   "weight = elastic\nt-max = inf\n")
    out = tmp_path / "run"
    code = run_cli(["flow", "--config", str(cfg), "--max-steps", "7",
                    "--out", str(out), "--no-figures"])
    assert code == cli.EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["max_steps"] == 7


def test_missing_scenario_is_config_error(tmp_path):
    assert run_cli(["flow", "--out", str(tmp_path / "x")]) == cli.EXIT_CONFIG


def test_bad_scenario_parameter_is_config_error(tmp_path):
    code = run_cli(["flow", "--scenario", "catenary", "--eps", "-1.0",
                    "--out", str(tmp_path / "x")])
    assert code == cli.EXIT_CONFIG


def test_nonexistent_config_file_is_config_error(tmp_path):
    code = run_cli(["flow", "--config", str(tmp_path / "absent.cfg")])
    assert code == cli.EXIT_CONFIG


# ---------------------------------------------------------------------------
# scenario / check round trip

def test_scenario_then_check(tmp_path):
    out = tmp_path / "scen"
    code = run_cli(["scenario", "--scenario", "catenary", "--eps", "1.0",
                    "--n", "201", "--out", str(out), "--no-figures"])
    assert code == cli.EXIT_OK
    curve_csv = out / "curve.csv"
    assert curve_csv.exists()
    code = run_cli(["check", "--input", str(curve_csv)])
    assert code == cli.EXIT_OK


def test_check_output_json(tmp_path, capsys):
    out = tmp_path / "scen"
    run_cli(["scenario", "--scenario", "catenary", "--eps", "1.0",
             "--n", "201", "--out", str(out), "--no-figures"])
    capsys.readouterr()
    assert run_cli(["check", "--input", str(out / "curve.csv")]) == cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["embedded"] is True
    assert payload["pairs"] == []
    assert payload["liyau"]["status"] == "holds"


def test_check_missing_file_is_config_error(tmp_path):
    assert run_cli(["check", "--input", str(tmp_path / "no.csv")]) == cli.EXIT_CONFIG


# ---------------------------------------------------------------------------
# elastica / fig8

def test_elastica_emits_curve(tmp_path, capsys):
    out = tmp_path / "el"
    code = run_cli(["elastica", "--kappa0-sq", "8.0", "--lam", "0.0",
                    "--s-lo", "-1.0", "--s-hi", "1.0", "--n", "501",
                    "--out", str(out), "--no-figures"])
    assert code == cli.EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record["family"] == "wavelike"
    curve = serialization.read_curve_csv(out / "elastica.csv")
    assert curve.n == 501
    assert np.all(curve.nodes[:, 1] > 0.0)
    # the JSON export round-trips to the same curve
    stored = serialization.curve_from_json_dict(
        json.loads((out / "elastica.json").read_text()))
    assert np.array_equal(stored.nodes, curve.nodes)


def test_elastica_rejects_circular_family(tmp_path):
    code = run_cli(["elastica", "--kappa0-sq", "2.0", "--lam", "0.0",
                    "--out", str(tmp_path / "el")])
    assert code == cli.EXIT_CONFIG


def test_fig8_record(tmp_path, capsys):
    out = tmp_path / "f8"
    code = run_cli(["fig8", "--lam", "0.2", "--n", "801",
                    "--out", str(out), "--no-figures"])
    assert code == cli.EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["lam"] == 0.2
    assert 1.0 / np.sqrt(2.0) < rec["p"] < 1.0
    assert rec["segment_energy"] > 8.0
    assert rec["closing_residual"] < 1e-10
    assert (out / "figure_eight.csv").exists()


def test_fig8_out_of_window_is_config_error(tmp_path):
    assert run_cli(["fig8", "--lam", "7.0"]) == cli.EXIT_CONFIG


# ---------------------------------------------------------------------------
# special-eval

def test_special_eval(capsys):
    assert run_cli(["special-eval", "--fn", "K", "--p", "0.5"]) == cli.EXIT_OK
    val = float(capsys.readouterr().out.strip())
    from hypflow.special import complete_k
    assert val == complete_k(0.5)


def test_special_eval_jacobi(capsys):
    assert run_cli(["special-eval", "--fn", "sn", "--x", "0.7",
                    "--p", "0.5"]) == cli.EXIT_OK
    val = float(capsys.readouterr().out.strip())
    from hypflow.special import jacobi_sn
    assert val == jacobi_sn(0.7, 0.5)


def test_special_eval_domain_error():
    assert run_cli(["special-eval", "--fn", "K", "--p", "1.0"]) == cli.EXIT_CONFIG


# ---------------------------------------------------------------------------
# acceptance

def test_acceptance_single_criterion(capsys):
    assert run_cli(["acceptance", "--only", "1"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    lines = [ln for ln in out.splitlines() if ln.startswith(("PASS", "FAIL"))]
    assert len(lines) == 1
    assert lines[0].startswith("PASS")


def test_acceptance_unknown_criterion_is_config_error():
    assert run_cli(["acceptance", "--only", "99"]) == cli.EXIT_CONFIG
