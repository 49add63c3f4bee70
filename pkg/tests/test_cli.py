import subprocess
import sys

import pytest

from polariton_gyro.cli import main
from polariton_gyro.config import PRESETS, parse_config, preset


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_presets_listing(capsys):
    code, out, _ = run(capsys, "presets")
    assert code == 0
    assert [line.split("\t")[0] for line in out.splitlines()] == sorted(PRESETS)


def test_phase_report(capsys):
    code, out, _ = run(capsys, "phase", "--preset", "fig2")
    assert code == 0
    values = dict(line.split("=", 1) for line in out.splitlines())
    assert {"phase_optical_rad", "phase_hybrid_rad", "enhancement", "kappa_L_total", "valid"} <= set(values)
    assert float(values["enhancement"]) == pytest.approx((1 + preset("fig2").ratio) / 2, rel=1e-8)
    assert values["flag.slow_rotation"] == "true"


def test_sweep_to_file(tmp_path, capsys):
    target = tmp_path / "fig2.csv"
    code, out, _ = run(capsys, "sweep", "--preset", "fig2", "--output", str(target))
    assert code == 0 and out == ""
    assert len(target.read_text().splitlines()) == 201


def test_sweep_byte_identical(capsys):
    _, first, _ = run(capsys, "sweep", "--preset", "fig2")
    _, second, _ = run(capsys, "sweep", "--preset", "fig2")
    assert first == second and first.startswith("swept_var,")


def test_config_file_and_echo(tmp_path, capsys):
    path = tmp_path / "run.toml"
    path.write_text(PRESETS["fig3-left"])
    code, out, _ = run(capsys, "config", "--config", str(path), "--absorption", "fig3")
    assert code == 0
    config = parse_config(out)
    assert config.absorption == "fig3"
    assert config.segments == preset("fig3-left").segments


def test_design_exit_codes(tmp_path, capsys):
    code, out, _ = run(capsys, "design", "--preset", "fig3-left")
    assert code == 0
    assert "binding=absorption" in out
    bad = tmp_path / "cell.toml"
    bad.write_text('cross_section = "1 cm^2"\n[[segment]]\nlength = "1 cm"\ndensity = "1e11 cm^-3"\nxi = 10\ntemperature_ratio = 1\n')
    code, out, _ = run(capsys, "design", "--config", str(bad))
    assert code == 3
    assert "feasible=false" in out


def test_design_budget_flag(capsys):
    _, loose, _ = run(capsys, "design", "--preset", "fig3-left", "--budget", "10")
    _, tight, _ = run(capsys, "design", "--preset", "fig3-left")
    assert loose != tight
    assert "kappa_budget=1.00000000e+01" in loose


def test_bad_config_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    path.write_text("[[segment]]\nalpha = 1\nxi = 1\neta = -0.5\n")
    code, _, err = run(capsys, "phase", "--config", str(path))
    assert code == 2
    assert "eta" in err


def test_oracle_check_vacuum(tmp_path, capsys):
    path = tmp_path / "vac.toml"
    path.write_text('radius = "10 cm"\n')
    code, out, err = run(capsys, "oracle-check", "--config", str(path))
    assert code == 0, err
    assert out.splitlines()[1].split(",")[-5:][0] == "pass"


def test_oracle_check_reports_failures(tmp_path, capsys):
    # thermal phase corrections at xi = 200 exceed a 1e-6 phase tolerance
    path = tmp_path / "warm.toml"
    path.write_text(
        'table = "fig3"\nsweep_min = 200\nsweep_max = 201\noracle_count = 2\ntemperature_ratios = [1]\n'
        '[[segment]]\nlength = "100 um"\nalpha = 100\nxi = 1000\ntemperature_ratio = 1\n'
    )
    code, _, err = run(capsys, "oracle-check", "--config", str(path), "--tolerance", "1e-6")
    assert code == 1
    assert "phase deviation" in err


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "polariton_gyro", "presets"], capture_output=True, text=True, check=True
    ).stdout
    assert "fig2" in out
