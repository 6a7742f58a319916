import numpy as np
import pytest

from modeswap_figures.cli import main
from modeswap_figures.data import (
    CsvFormatError,
    align_grids,
    load_run,
    load_summary,
)

HEADER = "tau,n_a1,n_b,n_a2,G1,G2,theta,n_dark,fidelity"


def write_run(path, n=11, tau_max=3.0):
    tau = np.linspace(0.0, tau_max, n)
    lines = [HEADER]
    for t in tau:
        x = t / tau_max
        lines.append(
            ",".join(
                f"{v:.9g}"
                for v in (t, 1 - x, 0.1 * x * (1 - x), x, 1.0, 0.5, 0.3, 0.05, x**2)
            )
        )
    path.write_text("\n".join(lines) + "\n")
    return path


def write_summary(path):
    path.write_text(
        "gamma_s,peak_fidelity,peak_tau\n"
        "0.01,0.96,2.85\n0.03,0.955,2.85\n0.1,0.95,2.84\n"
    )
    return path


def test_load_run_roundtrip(tmp_path):
    run = load_run(write_run(tmp_path / "run.csv"))
    assert run["tau"].shape == (11,)
    assert run["fidelity"][-1] == pytest.approx(1.0)


def test_load_run_missing_file(tmp_path):
    with pytest.raises(CsvFormatError, match="not found"):
        load_run(tmp_path / "absent.csv")


def test_load_run_empty_file(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("")
    with pytest.raises(CsvFormatError, match="empty"):
        load_run(p)


def test_load_run_header_only(tmp_path):
    p = tmp_path / "headeronly.csv"
    p.write_text(HEADER + "\n")
    with pytest.raises(CsvFormatError, match="no data rows"):
        load_run(p)


def test_load_run_missing_columns_named(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("tau,n_a1\n0,1\n")
    with pytest.raises(CsvFormatError, match="n_dark"):
        load_run(p)


def test_load_run_malformed_row(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text(HEADER + "\n0,1,0,0,1,0,0,0\n")
    with pytest.raises(CsvFormatError, match="line 2"):
        load_run(p)


def test_load_run_non_numeric_cell(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text(HEADER + "\n0,1,0,0,1,0,0,0,oops\n")
    with pytest.raises(CsvFormatError, match="line 2"):
        load_run(p)


def test_load_summary(tmp_path):
    s = load_summary(write_summary(tmp_path / "summary.csv"))
    assert list(s["gamma_s"]) == [0.01, 0.03, 0.1]


def test_align_grids_resamples_with_warning(tmp_path):
    a = load_run(write_run(tmp_path / "a.csv", n=11))
    b = load_run(write_run(tmp_path / "b.csv", n=7))
    with pytest.warns(UserWarning, match="resampling"):
        out = align_grids([a, b])
    assert out[1]["tau"].shape == out[0]["tau"].shape
    assert out[1]["fidelity"][-1] == pytest.approx(b["fidelity"][-1])


def test_align_grids_identical_grids_untouched(tmp_path):
    a = load_run(write_run(tmp_path / "a.csv"))
    b = load_run(write_run(tmp_path / "b.csv"))
    out = align_grids([a, b])
    assert out[1] is b


def test_plot_protocol_cli(tmp_path):
    csv = write_run(tmp_path / "run.csv")
    out = tmp_path / "fig" / "protocol.png"
    rc = main(["plot-protocol", "--in", str(csv), "--out", str(out), "--title", "demo"])
    assert rc == 0
    assert out.is_file() and out.stat().st_size > 0


def test_plot_protocol_is_deterministic(tmp_path):
    csv = write_run(tmp_path / "run.csv")
    out1 = tmp_path / "one.png"
    out2 = tmp_path / "two.png"
    assert main(["plot-protocol", "--in", str(csv), "--out", str(out1)]) == 0
    assert main(["plot-protocol", "--in", str(csv), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_plot_protocol_bad_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("tau\n0\n")
    rc = main(["plot-protocol", "--in", str(bad), "--out", str(tmp_path / "x.png")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "missing required column" in err and "fidelity" in err


def test_plot_sweep_cli(tmp_path):
    summary = write_summary(tmp_path / "summary.csv")
    runs = [
        write_run(tmp_path / "g1.csv", n=11),
        write_run(tmp_path / "g2.csv", n=9),  # mismatched grid -> resample
        write_run(tmp_path / "g3.csv", n=11),
    ]
    out = tmp_path / "sweep.png"
    with pytest.warns(UserWarning, match="resampling"):
        rc = main(
            ["plot-sweep", "--summary", str(summary), "--out", str(out), "--runs"]
            + [str(r) for r in runs]
        )
    assert rc == 0
    assert out.is_file()


def test_plot_sweep_summary_only(tmp_path):
    summary = write_summary(tmp_path / "summary.csv")
    out = tmp_path / "sweep.png"
    assert main(["plot-sweep", "--summary", str(summary), "--out", str(out)]) == 0
    assert out.is_file()


def test_plot_sweep_bad_summary(tmp_path, capsys):
    bad = tmp_path / "summary.csv"
    bad.write_text("gamma\n0.1\n")
    rc = main(["plot-sweep", "--summary", str(bad), "--out", str(tmp_path / "x.png")])
    assert rc == 2
    assert "peak_fidelity" in capsys.readouterr().err
