"""State metrics: partial traces, Uhlmann fidelity, occupations, purity."""

from __future__ import annotations

import logging

import numpy as np

from .fockspace import ModeLayout, QState

logger = logging.getLogger(__name__)

# Eigenvalues in [-CLAMP_LIMIT, 0) are treated as integrator positivity slack
# and clamped to zero; anything more negative is a genuine failure.
CLAMP_LIMIT = 1e-6


def partial_trace_matrix(rho: np.ndarray, layout: ModeLayout, keep: int) -> np.ndarray:
    """Reduced density matrix of one mode, tracing out the other two."""
    if keep not in (0, 1, 2):
        raise ValueError(f"mode index must be 0, 1 or 2, got {keep}")
    d = layout.dims
    r = rho.reshape(d[0], d[1], d[2], d[0], d[1], d[2])
    if keep == 0:
        return np.einsum("abcdbc->ad", r)
    if keep == 1:
        return np.einsum("abcaec->be", r)
    return np.einsum("abcabf->cf", r)


def partial_trace(state: QState, keep: int) -> np.ndarray:
    return partial_trace_matrix(state.rho, state.layout, keep)


def _validated_psd(rho: np.ndarray, name: str) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition with negative-eigenvalue clamping and renormalization."""
    rho = np.asarray(rho, dtype=complex)
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > 1e-8:
        raise ValueError(f"{name} is not Hermitian (deviation {herm:.3e})")
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if w.min() < -CLAMP_LIMIT:
        raise ValueError(f"{name} has eigenvalue {w.min():.3e} below -{CLAMP_LIMIT:g}")
    if w.min() < 0:
        logger.debug("clamping %s eigenvalues by %.3e", name, -w.min())
        w = np.clip(w, 0.0, None)
    total = w.sum()
    if not 0.5 < total < 2.0:
        raise ValueError(f"{name} is not normalizable (trace {total:.3e})")
    return w / total, v


def sqrt_psd(rho: np.ndarray) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix."""
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def _pad(rho: np.ndarray, d: int) -> np.ndarray:
    if rho.shape[0] == d:
        return rho
    out = np.zeros((d, d), dtype=complex)
    out[: rho.shape[0], : rho.shape[0]] = rho
    return out


def uhlmann_fidelity(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """F = (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2, in [0, 1].

    Uses the pure-state shortcut F = <psi|rho2|psi> when rho1 is rank one.
    Inputs of different dimension are zero-padded to the larger one.
    """
    d = max(rho1.shape[0], rho2.shape[0])
    w1, v1 = _validated_psd(_pad(np.asarray(rho1, complex), d), "rho1")
    w2, v2 = _validated_psd(_pad(np.asarray(rho2, complex), d), "rho2")
    rho2n = (v2 * w2) @ v2.conj().T

    if np.sum(w1 > 1e-12) == 1:
        psi = v1[:, int(np.argmax(w1))]
        f = float(np.real(psi.conj() @ rho2n @ psi))
        return min(max(f, 0.0), 1.0)

    s = (v1 * np.sqrt(w1)) @ v1.conj().T
    mid = s @ rho2n @ s
    w = np.linalg.eigvalsh(0.5 * (mid + mid.conj().T))
    f = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)


def occupation(state: QState, mode: int) -> float:
    """Mean photon/excitation number <a^dag a> of one mode."""
    red = partial_trace(state, mode)
    n = np.arange(red.shape[0])
    val = np.sum(n * np.real(np.diag(red)))
    return float(val)


def purity(state: QState) -> float:
    """Tr rho^2."""
    return float(np.real(np.trace(state.rho @ state.rho)))
