"""Command-line interface: subcommands, outputs, exit codes."""
import pytest

from capinflow.cli import main


def test_validate_ok(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "overall: PASS" in out


def test_validate_failure_exit_code(capsys):
    assert main(["validate", "--override", "B_D=0.89"]) == 2
    assert "FAIL" in capsys.readouterr().out


def test_validate_unknown_override_exit_code(capsys):
    assert main(["validate", "--override", "B_X=0.9"]) == 2
    assert "unknown configuration key" in capsys.readouterr().err


def test_simulate_writes_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    rc = main(
        [
            "simulate",
            "--seed",
            "4",
            "--horizon",
            "6",
            "--out",
            str(out),
            "--dump-draws",
            "--trace",
        ]
    )
    assert rc == 0
    assert (out / "series.csv").exists()
    assert (out / "trajectories.gnuplot").exists()
    assert (out / "draws.csv").exists()
    assert (out / "trace.csv").exists()
    series_lines = (out / "series.csv").read_text().strip().split("\n")
    assert len(series_lines) == 7
    assert "mean=" in capsys.readouterr().out


def test_simulate_feasibility_refusal(tmp_path):
    rc = main(
        ["simulate", "--override", "B_D=0.89", "--out", str(tmp_path / "x"), "--horizon", "3"]
    )
    assert rc == 2


def test_simulate_solver_failure_exit_code(tmp_path, capsys):
    """Accumulating funds at the default parameters drives the borrower
    insolvent within a few periods: solver-level failure, exit code 3."""
    rc = main(
        ["simulate", "--funds", "accumulate", "--out", str(tmp_path / "x")]
    )
    assert rc == 3
    assert "funds became non-positive" in capsys.readouterr().err


def test_simulate_config_file(tmp_path):
    cfg = tmp_path / "model.cfg"
    cfg.write_text("horizon = 4\ngamma = 6\n")
    rc = main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "run")])
    assert rc == 0
    lines = (tmp_path / "run" / "series.csv").read_text().strip().split("\n")
    assert len(lines) == 5


def test_compare_preset_outputs(tmp_path, capsys):
    out = tmp_path / "cmp"
    rc = main(
        [
            "compare",
            "--preset",
            "gamma-shock",
            "--horizon",
            "8",
            "--seed",
            "2",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    for name in ("baseline.csv", "scenario.csv", "diff.csv", "summary.csv", "trajectories.gnuplot"):
        assert (out / name).exists(), name
    text = capsys.readouterr().out
    assert "gamma-shock" in text
    summary = (out / "summary.csv").read_text()
    assert "percent_change" in summary
    assert "arc_elasticity" in summary


def test_compare_custom_scenario(tmp_path, capsys):
    out = tmp_path / "cmp"
    rc = main(
        [
            "compare",
            "--scenario",
            "e_ratio_mean=0.96",
            "--horizon",
            "6",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    assert "custom" in capsys.readouterr().out


def test_compare_requires_preset_or_scenario(tmp_path, capsys):
    assert main(["compare", "--out", str(tmp_path / "x")]) == 2
    assert "needs --preset" in capsys.readouterr().err


def test_sweep_stdout(capsys):
    rc = main(["sweep", "--param", "gamma", "--values", "4,15", "--horizon", "5"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0].startswith("gamma,")
    assert len(lines) == 3


def test_sweep_bad_values(capsys):
    assert main(["sweep", "--param", "gamma", "--values", " ", "--horizon", "5"]) == 2


def test_coeffs_debug_dump(capsys):
    rc = main(["coeffs", "--r-star", "0.14"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "lender quadratic" in out
    assert "borrower cubic" in out


def test_version_mentions_backend(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "backend" in capsys.readouterr().out
