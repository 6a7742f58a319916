"""CSV loading and validation for simulator output files."""

from __future__ import annotations

import csv
import warnings
from pathlib import Path

import numpy as np

REQUIRED_COLUMNS = (
    "tau",
    "n_a1",
    "n_b",
    "n_a2",
    "G1",
    "G2",
    "theta",
    "n_dark",
    "fidelity",
)
SUMMARY_COLUMNS = ("gamma_s", "peak_fidelity", "peak_tau")


class CsvFormatError(ValueError):
    """Raised for missing, empty or malformed CSV inputs."""


def _load(path: str | Path, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    path = Path(path)
    if not path.is_file():
        raise CsvFormatError(f"{path}: file not found")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        missing = [c for c in required if c not in header]
        if missing:
            raise CsvFormatError(
                f"{path}: missing required column(s) {', '.join(missing)} "
                f"(found: {', '.join(header) or 'none'})"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise CsvFormatError(
                    f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}"
                )
            try:
                rows.append([float(cell) for cell in row])
            except ValueError as exc:
                raise CsvFormatError(f"{path}: line {lineno}: {exc}") from None
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    data = np.asarray(rows)
    return {name: data[:, header.index(name)] for name in required}


def load_run(path: str | Path) -> dict[str, np.ndarray]:
    """Load one protocol run (time-series CSV)."""
    return _load(path, REQUIRED_COLUMNS)


def load_summary(path: str | Path) -> dict[str, np.ndarray]:
    """Load a sweep summary CSV."""
    return _load(path, SUMMARY_COLUMNS)


def align_grids(runs: list[dict[str, np.ndarray]]) -> list[dict[str, np.ndarray]]:
    """Resample runs onto the first run's tau grid when the grids differ."""
    if not runs:
        return runs
    ref = runs[0]["tau"]
    out = [runs[0]]
    for run in runs[1:]:
        tau = run["tau"]
        if tau.shape == ref.shape and np.allclose(tau, ref):
            out.append(run)
            continue
        warnings.warn(
            f"tau grids differ ({tau.size} vs {ref.size} points); "
            "resampling onto the first run's grid"
        )
        resampled = {"tau": ref}
        for key, vals in run.items():
            if key != "tau":
                resampled[key] = np.interp(ref, tau, vals)
        out.append(resampled)
    return out
