import json

import numpy as np
import pytest

from modeswap.cli import CSV_HEADER, build_parser, main

SMALL_CONFIG = {
    "layout": {"dims": [4, 4, 4]},
    "protocol": {"kind": "double-swap", "initial": "fock1", "samples": 21},
    "integrator": {"dt_max": 2e-3},
}


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(SMALL_CONFIG))
    return str(path)


def test_run_writes_csv_with_contract_header(tmp_path, config_file, capsys):
    rc = main(["run", "--config", config_file, "--lossy-defaults", "--out", str(tmp_path)])
    assert rc == 0
    out_file = tmp_path / "double-swap_fock1.csv"
    lines = out_file.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 22  # header + one row per sample
    row = lines[1].split(",")
    assert len(row) == 9
    assert float(row[0]) == 0.0
    assert float(row[1]) == pytest.approx(1.0)  # photon starts in a1
    captured = capsys.readouterr()
    assert "peak fidelity" in captured.out


def test_run_output_is_bit_identical(tmp_path, config_file):
    out1 = tmp_path / "first"
    out2 = tmp_path / "second"
    assert main(["run", "--config", config_file, "--out", str(out1)]) == 0
    assert main(["run", "--config", config_file, "--out", str(out2)]) == 0
    f1 = (out1 / "double-swap_fock1.csv").read_bytes()
    f2 = (out2 / "double-swap_fock1.csv").read_bytes()
    assert f1 == f2


def test_run_unit_scale_summary_only(tmp_path, config_file, capsys):
    rc = main([
        "run", "--config", config_file, "--out", str(tmp_path), "--unit-scale", "1.0",
    ])
    assert rc == 0
    captured = capsys.readouterr()
    assert "MHz" in captured.out
    # CSV itself stays dimensionless: final tau equals the window end (pi)
    lines = (tmp_path / "double-swap_fock1.csv").read_text().splitlines()
    assert float(lines[-1].split(",")[0]) == pytest.approx(np.pi)


def test_missing_config_file_is_config_error(capsys):
    rc = main(["run", "--config", "/nonexistent/config.json"])
    assert rc == 2
    assert "config file not found" in capsys.readouterr().err


def test_unknown_config_key_is_config_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"laydout": {}}')
    rc = main(["run", "--config", str(path)])
    assert rc == 2
    assert "laydout" in capsys.readouterr().err


def test_malformed_json_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"layout": \n !}')
    rc = main(["run", "--config", str(path)])
    assert rc == 2
    assert "line 2" in capsys.readouterr().err


def test_bad_schedule_shape_is_config_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schedule": {"shape": "triangle"}}))
    rc = main(["run", "--config", str(path)])
    assert rc == 2
    assert "triangle" in capsys.readouterr().err


def test_bad_decay_rate_is_config_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"decay": {"gamma_s": -0.1}}))
    rc = main(["run", "--config", str(path)])
    assert rc == 2


def test_integration_failure_exit_code(tmp_path, config_file, capsys):
    # a huge fixed step destroys positivity, which the invariant checks catch
    rc = main([
        "run", "--config", config_file, "--protocol", "dark-state",
        "--lossy-defaults", "--dt", "0.5", "--samples", "5", "--out", str(tmp_path),
    ])
    assert rc == 3
    assert "integration failure" in capsys.readouterr().err


def test_sweep_writes_summary(tmp_path, config_file, capsys):
    rc = main([
        "sweep", "--config", config_file, "--values", "0.0,0.1",
        "--out", str(tmp_path),
    ])
    assert rc == 0
    summary = (tmp_path / "summary.csv").read_text().splitlines()
    assert summary[0] == "gamma_s,peak_fidelity,peak_tau"
    rows = [line.split(",") for line in summary[1:]]
    assert [float(r[0]) for r in rows] == [0.0, 0.1]
    # more spin decay cannot improve the transfer
    assert float(rows[0][1]) >= float(rows[1][1])
    assert (tmp_path / "gamma_s_0.csv").exists()
    assert (tmp_path / "gamma_s_0.1.csv").exists()


def test_sweep_rejects_bad_values(config_file, capsys):
    assert main(["sweep", "--config", config_file, "--values", "0.1,zebra"]) == 2
    assert main(["sweep", "--config", config_file, "--values", ""]) == 2
    assert main(["sweep", "--config", config_file, "--values", "-0.1"]) == 2
    assert main(["sweep", "--config", config_file, "--parameter", "kappa1"]) == 2


def test_validate_quick_passes(capsys):
    rc = main(["validate", "--quick"])
    captured = capsys.readouterr()
    assert rc == 0
    assert "all checks passed" in captured.out
    assert "FAIL" not in captured.out


def test_validate_detects_injected_step_size(capsys):
    rc = main(["validate", "--quick", "--dt", "0.5"])
    captured = capsys.readouterr()
    assert rc == 1
    assert "FAIL" in captured.out


def test_parser_rejects_unknown_protocol():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["run", "--protocol", "teleport"])
