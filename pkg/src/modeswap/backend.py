"""Kernel backend selection.

The compiled Cython kernel is preferred when the extension is importable;
otherwise the NumPy/SciPy fallback is used.  Set ``MODESWAP_KERNEL=python``
or ``MODESWAP_KERNEL=cython`` to force a backend (the latter raises if the
extension is missing).
"""

from __future__ import annotations

import os


def _load():
    choice = os.environ.get("MODESWAP_KERNEL", "auto")
    if choice not in ("auto", "cython", "python"):
        raise ValueError(f"MODESWAP_KERNEL must be auto, cython or python, got {choice!r}")
    if choice in ("auto", "cython"):
        try:
            from . import _kernel

            return _kernel, "cython"
        except ImportError:
            if choice == "cython":
                raise
    from . import _kernel_py

    return _kernel_py, "python"


_impl, KERNEL_BACKEND = _load()


def propagate(rho, h_indptr, h_indices, h1_data, h2_data, jumps, ndiag, g1, g2, dt, nsteps):
    return _impl.propagate(
        rho, h_indptr, h_indices, h1_data, h2_data, jumps, ndiag, g1, g2, dt, nsteps
    )
