"""Pure NumPy/SciPy fallback for the RK4 Lindblad propagation kernel.

Same call signature as the compiled ``modeswap._kernel`` extension.  The
right-hand side exploits that the output is Hermitian for Hermitian input:
the commutator and anticommutator parts are built as M + M^H from a single
sparse product, and each jump term as c (c rho)^H.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def _csr(indptr, indices, data, n):
    return sp.csr_matrix((data, indices.astype(np.int32), indptr.astype(np.int32)), shape=(n, n))


class _Ops:
    """scipy matrices rebuilt from the raw CSR arrays, cached per call site."""

    def __init__(self, h_indptr, h_indices, h1_data, h2_data, jumps, n):
        self.h1 = _csr(h_indptr, h_indices, h1_data, n)
        self.h2 = _csr(h_indptr, h_indices, h2_data, n)
        self.jumps = [_csr(jp, ji, jd, n) for jp, ji, jd in jumps]


def _rhs(rho, ops, ndiag_half, ga, gb):
    m = (-1j * ga) * (ops.h1 @ rho)
    m += (-1j * gb) * (ops.h2 @ rho)
    m -= ndiag_half[:, None] * rho
    out = m + m.conj().T
    for c in ops.jumps:
        t = c @ rho
        out += c @ t.conj().T
    return out


def propagate(rho, h_indptr, h_indices, h1_data, h2_data, jumps, ndiag, g1, g2, dt, nsteps):
    """Advance rho by nsteps fixed RK4 steps of size dt.

    ``g1``/``g2`` hold the coupling values on the half-step grid
    (2*nsteps + 1 points).  Returns the propagated density matrix.
    """
    n = rho.shape[0]
    ops = _Ops(h_indptr, h_indices, h1_data, h2_data, jumps, n)
    half = 0.5 * np.asarray(ndiag)
    rho = np.array(rho, dtype=complex)
    for s in range(nsteps):
        k1 = _rhs(rho, ops, half, g1[2 * s], g2[2 * s])
        k2 = _rhs(rho + (0.5 * dt) * k1, ops, half, g1[2 * s + 1], g2[2 * s + 1])
        k3 = _rhs(rho + (0.5 * dt) * k2, ops, half, g1[2 * s + 1], g2[2 * s + 1])
        k4 = _rhs(rho + dt * k3, ops, half, g1[2 * s + 2], g2[2 * s + 2])
        rho += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    return rho
