"""Independent references for the integrator.

These routines deliberately avoid the RK4 kernel path: constant-coefficient
segments are solved by exponentiating the vectorized Liouvillian
(column-stacking convention, vec(A X B) = (B^T kron A) vec(X)), and coherent
state transfer has closed-form Heisenberg / classical-amplitude solutions.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .dynamics import DecayRates, build_generators
from .fockspace import ModeLayout, QState

MAX_VECTORIZED_DIM = 65536  # guard on dim**2 for the dense matrix exponential


def heisenberg_swap_amplitudes(
    alpha1: complex, beta: complex, tau: float, g1: float
) -> tuple[complex, complex]:
    """Coherent amplitudes of (a1, b) after beam-splitter evolution for time tau."""
    c, s = math.cos(g1 * tau), math.sin(g1 * tau)
    return (c * alpha1 - 1j * s * beta, c * beta - 1j * s * alpha1)


def liouvillian_matrix(h: np.ndarray, layout: ModeLayout, decay: DecayRates) -> np.ndarray:
    """Dense vectorized Liouvillian for a constant Hamiltonian (column stacking)."""
    dim = h.shape[0]
    if dim * dim > MAX_VECTORIZED_DIM:
        raise ValueError(
            f"vectorized dimension {dim*dim} exceeds guard {MAX_VECTORIZED_DIM}"
        )
    eye = np.eye(dim)
    lv = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    gen = build_generators(layout, decay)
    for c in gen.jump_csr:
        cd = c.toarray()
        n = cd.conj().T @ cd
        lv += np.kron(cd.conj(), cd)
        lv -= 0.5 * (np.kron(eye, n) + np.kron(n.T, eye))
    return lv


def liouvillian_exponential_evolve(
    initial: QState, h: np.ndarray, decay: DecayRates, tau: float
) -> QState:
    """rho(tau) = exp(tau L) rho(0) for a constant-coefficient segment."""
    layout = initial.layout
    lv = liouvillian_matrix(h, layout, decay)
    dim = layout.total_dim
    vec = initial.rho.reshape(dim * dim, order="F")
    out = scipy.linalg.expm(tau * lv) @ vec
    rho = out.reshape(dim, dim, order="F")
    return QState(layout, 0.5 * (rho + rho.conj().T))


def classical_amplitudes_rhs(
    amps: np.ndarray, g1: float, g2: float, decay: DecayRates
) -> np.ndarray:
    """First-moment equations of the damped three-mode model, d(alpha)/d(tau)."""
    a1, b, a2 = amps
    k1, gs, k2 = decay.as_tuple()
    return np.array(
        [
            -1j * g1 * b - 0.5 * k1 * a1,
            -1j * (g1 * a1 + g2 * a2) - 0.5 * gs * b,
            -1j * g2 * b - 0.5 * k2 * a2,
        ]
    )


def double_swap_classical_amplitudes(
    alpha: complex, eps: float = 0.0
) -> tuple[complex, complex, complex]:
    """Lossless classical amplitudes (a1, b, a2) after the double swap with the
    final swap segment overrunning its pi/2 duration by eps."""
    a1, b = heisenberg_swap_amplitudes(alpha, 0.0, math.pi / 2.0, 1.0)
    # second segment exchanges b and a2 with the same rotation form
    a2_new, b_new = heisenberg_swap_amplitudes(0.0, b, math.pi / 2.0 + eps, 1.0)
    return (a1, b_new, a2_new)


def lossless_coherent_fidelity(alpha: complex, eps: float = 0.0) -> float:
    """Coherent-state transfer fidelity under a timing error on the final swap.

    The joint output is a product of coherent states, so the fidelity against
    the ideal target (vacuum, vacuum, -alpha) is exp(-sum |delta amplitude|^2).
    """
    a1, b, a2 = double_swap_classical_amplitudes(alpha, eps)
    target = np.array([0.0, 0.0, -alpha], dtype=complex)
    actual = np.array([a1, b, a2], dtype=complex)
    return float(math.exp(-np.sum(np.abs(target - actual) ** 2)))


def expm_taylor(a: np.ndarray, terms: int = 40) -> np.ndarray:
    """Plain series summation of exp(a); cross-check for small matrices only."""
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    return out
