"""Secondary-component check: the figures package renders real simulator CSVs.

The figures package never imports the simulator (the boundary is the CSV
contract), so the integration direction is tested from this side.
"""

import json

import numpy as np
import pytest

from modeswap.cli import main as modeswap_main

figures_cli = pytest.importorskip(
    "modeswap_figures.cli", reason="figures package not installed"
)
from modeswap_figures.data import load_run  # noqa: E402

SMALL_CONFIG = {
    "layout": {"dims": [4, 4, 4]},
    "protocol": {"samples": 41},
    "integrator": {"dt_max": 2e-3},
    "decay": {"kappa1": 0.0, "gamma_s": 0.0, "kappa2": 0.0},
}


@pytest.fixture(scope="module")
def run_csv(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("runs")
    cfg = tmp / "config.json"
    cfg.write_text(json.dumps(SMALL_CONFIG))
    rc = modeswap_main(
        ["run", "--config", str(cfg), "--protocol", "double-swap", "--out", str(tmp)]
    )
    assert rc == 0
    return tmp / "double-swap_fock1.csv"


def test_simulator_csv_satisfies_figures_contract(run_csv):
    run = load_run(run_csv)
    # lossless double swap: n_a1 and n_b cross in the first quarter swap and
    # the transfer completes at tau = pi
    crossing = np.argmin(np.abs(run["n_a1"] - run["n_b"])[:20])
    assert run["tau"][crossing] == pytest.approx(np.pi / 4, abs=0.15)
    assert run["fidelity"][-1] == pytest.approx(1.0, abs=1e-6)


def test_plot_protocol_renders_simulator_output(run_csv, tmp_path):
    out = tmp_path / "protocol.png"
    rc = figures_cli.main(["plot-protocol", "--in", str(run_csv), "--out", str(out)])
    assert rc == 0
    assert out.stat().st_size > 0


def test_plot_sweep_renders_simulator_output(run_csv, tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(SMALL_CONFIG))
    rc = modeswap_main(
        [
            "sweep", "--config", str(cfg), "--protocol", "double-swap",
            "--lossy-defaults", "--values", "0.01,0.1", "--out", str(tmp_path),
        ]
    )
    assert rc == 0
    out = tmp_path / "sweep.png"
    rc = figures_cli.main(
        [
            "plot-sweep",
            "--summary", str(tmp_path / "summary.csv"),
            "--runs", str(tmp_path / "gamma_s_0.01.csv"), str(tmp_path / "gamma_s_0.1.csv"),
            "--out", str(out),
        ]
    )
    assert rc == 0
    assert out.stat().st_size > 0
