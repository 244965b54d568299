"""Tests for the vpq command line."""

import json

import pandas as pd
import pytest

from vpquad.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, cli_main
from vpquad.core.sim_engine import TELEMETRY_COLUMNS


def test_trim_prints_operating_point(capsys):
    assert cli_main(["trim"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "=== Hover Trim ===" in out
    assert "12.4" in out
    assert "Thrust gain K:       322.8" in out


def test_trim_with_config(temp_dir, capsys):
    cfg = temp_dir / "heavy.toml"
    cfg.write_text("[vehicle]\nmass = 1.6\n", encoding="utf-8")
    assert cli_main(["trim", "--config", str(cfg)]) == EXIT_OK
    assert "Mg/4 = 3.9240 N" in capsys.readouterr().out


def test_usage_errors():
    assert cli_main([]) == EXIT_USAGE
    assert cli_main(["fly"]) == EXIT_USAGE
    assert cli_main(["run", "--dt", "-1"]) == EXIT_USAGE
    assert cli_main(["run", "--scenario", "loop"]) == EXIT_USAGE


def test_version():
    assert cli_main(["--version"]) == EXIT_OK


def test_short_run_writes_outputs(temp_dir, capsys):
    code = cli_main(["run", "--duration", "0.05", "--decimation", "5", "--out", str(temp_dir)])
    assert code == EXIT_OK
    frame = pd.read_csv(temp_dir / "stabilization.csv")
    assert list(frame.columns) == list(TELEMETRY_COLUMNS)
    assert len(frame) == 11
    summary = json.loads((temp_dir / "stabilization_summary.json").read_text(encoding="utf-8"))
    assert summary["simulated_time"] == pytest.approx(0.05)
    assert "=== Summary (stabilization) ===" in capsys.readouterr().out


def test_run_positional_config(temp_dir):
    cfg = temp_dir / "flip.toml"
    cfg.write_text(
        f'[scenario]\nkind = "flip"\nduration = 0.02\n\n[output]\npath = "{temp_dir.as_posix()}"\n', encoding="utf-8"
    )
    assert cli_main(["run", str(cfg)]) == EXIT_OK
    assert (temp_dir / "flip.csv").exists()


def test_run_with_plots(temp_dir):
    assert cli_main(["run", "--duration", "0.02", "--out", str(temp_dir), "--plot"]) == EXIT_OK
    for name in ("attitude", "position", "thrust_coeff", "collective"):
        assert (temp_dir / f"stabilization_{name}.png").exists()


def test_bad_config_exits_one(temp_dir, capsys):
    cfg = temp_dir / "bad.toml"
    cfg.write_text("[rotor]\nradius = -0.1\n", encoding="utf-8")
    assert cli_main(["run", str(cfg), "--out", str(temp_dir)]) == EXIT_FAILURE
    assert "rotor.radius" in capsys.readouterr().err
    assert not (temp_dir / "stabilization.csv").exists()


def test_missing_config_exits_one(temp_dir, capsys):
    assert cli_main(["trim", "--config", str(temp_dir / "nope.toml")]) == EXIT_FAILURE
    assert "cannot read config" in capsys.readouterr().err


def test_failed_run_exits_one(temp_dir):
    cfg = temp_dir / "singular.toml"
    cfg.write_text("[scenario]\nperturbation_deg = [0.0, 90.0, 0.0]\nduration = 0.01\n", encoding="utf-8")
    assert cli_main(["run", str(cfg), "--out", str(temp_dir)]) == EXIT_FAILURE
    # header-only telemetry is still written
    assert len((temp_dir / "stabilization.csv").read_text(encoding="utf-8").splitlines()) == 1


@pytest.mark.slow
def test_acceptance_passes_with_defaults(capsys):
    assert cli_main(["acceptance", "--workers", "4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "Acceptance: PASS" in out


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
