"""Truncated bosonic Hilbert spaces, ladder operators and initial states.

All multi-mode objects live on the fixed tensor order (microwave cavity a1,
collective spin mode b, optical cavity a2).  Operators are plain dense complex
NumPy arrays; sparse versions used by the integrator are derived elsewhere.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

MODE_NAMES = ("a1", "b", "a2")

COHERENT_TAIL_WARN = 1e-6


class DimensionError(ValueError):
    """Raised for invalid or mismatched truncation dimensions."""


class TruncationError(ValueError):
    """Raised when a requested occupation does not fit in the truncated space."""


@dataclass(frozen=True)
class ModeLayout:
    """Truncation dimensions of the three modes, in (a1, b, a2) order."""

    dims: tuple[int, int, int]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3:
            raise DimensionError(f"expected 3 mode dimensions, got {len(dims)}")
        if any(d < 2 for d in dims):
            raise DimensionError(f"every mode dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2]


@dataclass
class QState:
    """Density matrix on the full truncated (a1, b, a2) space."""

    layout: ModeLayout
    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=complex)
        d = self.layout.total_dim
        if self.rho.shape != (d, d):
            raise DimensionError(
                f"density matrix shape {self.rho.shape} does not match layout dim {d}"
            )

    def validate(self, herm_tol=1e-10, trace_tol=1e-8, eig_tol=1e-8):
        """Check Hermiticity, unit trace and positivity; raise ValueError on failure."""
        herm = np.max(np.abs(self.rho - self.rho.conj().T))
        if herm > herm_tol:
            raise ValueError(f"state not Hermitian: deviation {herm:.3e}")
        tr = self.rho.trace()
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"state trace {tr} deviates from 1")
        w = np.linalg.eigvalsh(0.5 * (self.rho + self.rho.conj().T))
        if w.min() < -eig_tol:
            raise ValueError(f"state has negative eigenvalue {w.min():.3e}")

    def copy(self) -> "QState":
        return QState(self.layout, self.rho.copy())


def annihilation(d: int) -> np.ndarray:
    """Single-mode annihilation operator on a d-level truncated Fock space."""
    if d < 2:
        raise DimensionError(f"annihilation operator needs dim >= 2, got {d}")
    return np.diag(np.sqrt(np.arange(1, d)), k=1).astype(complex)


def creation(d: int) -> np.ndarray:
    return annihilation(d).conj().T


def number(d: int) -> np.ndarray:
    return np.diag(np.arange(d)).astype(complex)


def embed(op: np.ndarray, mode_index: int, layout: ModeLayout) -> np.ndarray:
    """Lift a single-mode operator to the joint space: I x ... x op x ... x I."""
    op = np.asarray(op, dtype=complex)
    if mode_index not in (0, 1, 2):
        raise DimensionError(f"mode_index must be 0, 1 or 2, got {mode_index}")
    d = layout.dims[mode_index]
    if op.shape != (d, d):
        raise DimensionError(
            f"operator shape {op.shape} does not match mode {mode_index} dim {d}"
        )
    factors = [np.eye(dk, dtype=complex) for dk in layout.dims]
    factors[mode_index] = op
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def fock_state(occupations, layout: ModeLayout) -> QState:
    """Pure product Fock state |n1, ns, n2><...| as a QState."""
    occupations = tuple(int(n) for n in occupations)
    if len(occupations) != 3:
        raise DimensionError("need one occupation per mode")
    vectors = []
    for n, d in zip(occupations, layout.dims):
        if not 0 <= n < d:
            raise TruncationError(f"occupation {n} out of range for dim {d}")
        v = np.zeros(d, dtype=complex)
        v[n] = 1.0
        vectors.append(v)
    return product_state(vectors, layout)


def product_state(mode_vectors, layout: ModeLayout) -> QState:
    """QState from one normalized state vector per mode."""
    psi = np.array([1.0], dtype=complex)
    for v, d in zip(mode_vectors, layout.dims):
        v = np.asarray(v, dtype=complex)
        if v.shape != (d,):
            raise DimensionError(f"mode vector shape {v.shape} does not match dim {d}")
        psi = np.kron(psi, v)
    psi = psi / np.linalg.norm(psi)
    return QState(layout, np.outer(psi, psi.conj()))


def coherent_state(alpha: complex, d: int) -> tuple[np.ndarray, float]:
    """Truncated, renormalized coherent state vector and its truncation tail weight.

    The tail weight is the probability the untruncated state assigns to
    Fock levels >= d; states with tail weight above 1e-6 trigger a warning.
    """
    if d < 2:
        raise DimensionError(f"coherent state needs dim >= 2, got {d}")
    n = np.arange(d)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    amps = np.exp(-0.5 * abs(alpha) ** 2) * alpha**n / np.exp(0.5 * log_fact)
    kept = float(np.sum(np.abs(amps) ** 2))
    tail = max(0.0, 1.0 - kept)
    if tail > COHERENT_TAIL_WARN:
        warnings.warn(
            f"coherent state |alpha|={abs(alpha):.3g} truncated at d={d}: "
            f"tail weight {tail:.3e}",
            stacklevel=2,
        )
    return amps / np.sqrt(kept), tail


def superposition_state(d: int = 2) -> np.ndarray:
    """Unit-norm (|0> + |1>)/sqrt(2) on a d-level mode."""
    if d < 2:
        raise DimensionError(f"superposition state needs dim >= 2, got {d}")
    v = np.zeros(d, dtype=complex)
    v[0] = v[1] = 1.0 / np.sqrt(2.0)
    return v


def vacuum_state(d: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[0] = 1.0
    return v
