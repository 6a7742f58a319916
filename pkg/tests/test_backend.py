"""Equivalence of the compiled kernel and the pure-Python fallback."""

import numpy as np
import pytest

from modeswap import backend
from modeswap._kernel_py import propagate as propagate_py
from modeswap.dynamics import LOSSY_DEFAULTS, build_generators
from modeswap.fockspace import ModeLayout, fock_state

cython_kernel = pytest.importorskip(
    "modeswap._kernel", reason="compiled kernel not built"
)


def _run(prop, nsteps=40, dt=1e-2, rho0=None):
    layout = ModeLayout((4, 4, 4))
    gen = build_generators(layout, LOSSY_DEFAULTS)
    if rho0 is None:
        rho0 = fock_state((1, 0, 0), layout).rho
    rng = np.random.default_rng(11)
    g1 = np.abs(rng.normal(size=2 * nsteps + 1))
    g2 = np.abs(rng.normal(size=2 * nsteps + 1))
    return prop(
        rho0,
        gen.h_indptr,
        gen.h_indices,
        gen.h1_data,
        gen.h2_data,
        gen.jump_arrays,
        gen.ndiag,
        g1,
        g2,
        dt,
        nsteps,
    )


def test_backends_agree_elementwise():
    out_cy = _run(cython_kernel.propagate)
    out_py = _run(propagate_py)
    assert np.max(np.abs(out_cy - out_py)) < 1e-13


def test_backend_selection_reports_cython():
    # the extension imports in this environment, so auto selection must use it
    assert backend.KERNEL_BACKEND == "cython"


def test_kernel_does_not_mutate_input():
    layout = ModeLayout((4, 4, 4))
    rho0 = fock_state((1, 0, 0), layout).rho
    before = rho0.copy()
    _run(cython_kernel.propagate, rho0=rho0)
    assert np.array_equal(rho0, before)
