"""Plotting companion for the modeswap simulator.

Consumes only the simulator's CSV contract (columns
``tau,n_a1,n_b,n_a2,G1,G2,theta,n_dark,fidelity`` and the sweep summary
``gamma_s,peak_fidelity,peak_tau``) and renders the standard protocol and
sweep panels as PNG files.
"""

from .data import REQUIRED_COLUMNS, SUMMARY_COLUMNS, CsvFormatError, load_run, load_summary
from .plots import plot_protocol, plot_sweep

__version__ = "0.1.0"

__all__ = [
    "REQUIRED_COLUMNS",
    "SUMMARY_COLUMNS",
    "CsvFormatError",
    "load_run",
    "load_summary",
    "plot_protocol",
    "plot_sweep",
]
