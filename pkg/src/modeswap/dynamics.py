"""Time-dependent Lindblad master equation for the three-mode transfer model.

The Hamiltonian is the beam-splitter pair
``H(tau) = G1(tau) (a1 b^dag + a1^dag b) + G2(tau) (a2 b^dag + a2^dag b)``
with photon/spin loss dissipators on all three modes.  Everything is
dimensionless: couplings in units of G, times in units of 1/G.

The propagation hot loop lives in a compiled kernel (``modeswap._kernel``)
with a NumPy/SciPy fallback; see ``modeswap.backend``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import backend, fockspace, metrics
from .fockspace import ModeLayout, QState

__all__ = [
    "ConstantPulse",
    "PiecewiseSwapPulse",
    "GaussianPulsePair",
    "DecayRates",
    "IntegratorOptions",
    "SimResult",
    "IntegrationError",
    "hamiltonian_at",
    "lindblad_rhs",
    "evolve",
]


class IntegrationError(RuntimeError):
    """Raised when the integrator fails or a state invariant is violated."""


# ---------------------------------------------------------------------------
# pulse schedules


@dataclass(frozen=True)
class ConstantPulse:
    """Time-independent coupling pair (G1, G2)."""

    g1: float
    g2: float

    def __post_init__(self):
        if self.g1 < 0 or self.g2 < 0:
            raise ValueError("coupling amplitudes must be >= 0")

    def values(self, tau: float) -> tuple[float, float]:
        return self.g1, self.g2

    def breakpoints(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class PiecewiseSwapPulse:
    """Sequential swap couplings: (G1, 0) on (t0, t1), (0, G2) on (t1, t2)."""

    g1: float
    g2: float
    t0: float
    t1: float
    t2: float

    def __post_init__(self):
        if self.g1 < 0 or self.g2 < 0:
            raise ValueError("coupling amplitudes must be >= 0")
        if not self.t0 < self.t1 < self.t2:
            raise ValueError(f"need t0 < t1 < t2, got {self.t0}, {self.t1}, {self.t2}")

    def values(self, tau: float) -> tuple[float, float]:
        if self.t0 <= tau < self.t1:
            return self.g1, 0.0
        if self.t1 <= tau <= self.t2:
            return 0.0, self.g2
        return 0.0, 0.0

    def breakpoints(self) -> tuple[float, ...]:
        return (self.t0, self.t1, self.t2)


@dataclass(frozen=True)
class GaussianPulsePair:
    """Gaussian couplings G_i(tau) = A_i exp(-(tau - c_i)^2 / w_i).

    Note the negative exponent: the sign is required for normalizable pulses
    (the source describing this pulse pair prints a positive exponent for G1,
    which diverges and is treated as a typo here).
    """

    a1: float
    c1: float
    w1: float
    a2: float
    c2: float
    w2: float

    def __post_init__(self):
        if self.a1 < 0 or self.a2 < 0:
            raise ValueError("coupling amplitudes must be >= 0")
        if self.w1 <= 0 or self.w2 <= 0:
            raise ValueError("Gaussian width parameters must be > 0")

    def values(self, tau: float) -> tuple[float, float]:
        g1 = self.a1 * math.exp(-((tau - self.c1) ** 2) / self.w1)
        g2 = self.a2 * math.exp(-((tau - self.c2) ** 2) / self.w2)
        return g1, g2

    def breakpoints(self) -> tuple[float, ...]:
        return ()


PulseSchedule = ConstantPulse | PiecewiseSwapPulse | GaussianPulsePair


# ---------------------------------------------------------------------------
# rates, options, results


@dataclass(frozen=True)
class DecayRates:
    """Loss rates (kappa1, gamma_s, kappa2) in units of G."""

    kappa1: float = 0.0
    gamma_s: float = 0.0
    kappa2: float = 0.0

    def __post_init__(self):
        if min(self.kappa1, self.gamma_s, self.kappa2) < 0:
            raise ValueError("decay rates must be >= 0")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.kappa1, self.gamma_s, self.kappa2)


LOSSY_DEFAULTS = DecayRates(kappa1=0.003, gamma_s=0.01, kappa2=0.1)


@dataclass(frozen=True)
class IntegratorOptions:
    dt_max: float = 1e-3
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    method: str = "rk4"  # "rk4" (fixed step) or "adaptive" (embedded RK45)

    def __post_init__(self):
        if self.dt_max <= 0:
            raise ValueError("dt_max must be > 0")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.method not in ("rk4", "adaptive"):
            raise ValueError(f"unknown integrator method {self.method!r}")


@dataclass
class SimResult:
    """Sampled time series from one master-equation run."""

    times: np.ndarray
    n_a1: np.ndarray
    n_b: np.ndarray
    n_a2: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    theta: np.ndarray
    n_dark: np.ndarray
    fidelity: np.ndarray
    final_state: QState = field(repr=False)

    @property
    def peak_fidelity(self) -> float:
        return float(np.max(self.fidelity))

    @property
    def peak_tau(self) -> float:
        return float(self.times[int(np.argmax(self.fidelity))])


# ---------------------------------------------------------------------------
# generators (sparse operators consumed by the propagation kernels)


class Generators:
    """Precomputed sparse operators for one (layout, decay) combination."""

    def __init__(self, layout: ModeLayout, decay: DecayRates):
        self.layout = layout
        self.decay = decay
        dims = layout.dims
        a_embedded = [
            sp.csr_matrix(fockspace.embed(fockspace.annihilation(dims[k]), k, layout))
            for k in range(3)
        ]
        self.a_ops = a_embedded
        h1 = a_embedded[0] @ a_embedded[1].getH() + a_embedded[0].getH() @ a_embedded[1]
        h2 = a_embedded[2] @ a_embedded[1].getH() + a_embedded[2].getH() @ a_embedded[1]
        self.h1_csr = h1.tocsr()
        self.h2_csr = h2.tocsr()

        # union pattern with per-term data arrays, for the fused kernel
        hs = (self.h1_csr + self.h2_csr).tocsr()
        hs.sort_indices()
        rows = np.repeat(np.arange(hs.shape[0]), np.diff(hs.indptr))
        cols = hs.indices
        h1_dense = self.h1_csr.toarray()
        h2_dense = self.h2_csr.toarray()
        self.h_indptr = hs.indptr.astype(np.int64)
        self.h_indices = hs.indices.astype(np.int64)
        self.h1_data = np.ascontiguousarray(h1_dense[rows, cols])
        self.h2_data = np.ascontiguousarray(h2_dense[rows, cols])

        # number-operator diagonals (real) per mode, for observables
        self.num_diags = [
            np.real(np.diag(fockspace.embed(fockspace.number(dims[k]), k, layout)))
            for k in range(3)
        ]
        rates = decay.as_tuple()
        self.ndiag = sum(r * nd for r, nd in zip(rates, self.num_diags))
        self.ndiag = np.ascontiguousarray(self.ndiag, dtype=float)

        self.jump_csr = []
        self.jump_arrays = []
        for r, a in zip(rates, a_embedded):
            if r > 0:
                c = (math.sqrt(r) * a).tocsr()
                c.sort_indices()
                self.jump_csr.append(c)
                self.jump_arrays.append(
                    (
                        c.indptr.astype(np.int64),
                        c.indices.astype(np.int64),
                        np.ascontiguousarray(c.data, dtype=complex),
                    )
                )

        # cross term a1^dag a2, used for the dark-mode occupation
        self.a1dag_a2 = (a_embedded[0].getH() @ a_embedded[2]).tocsr()


@lru_cache(maxsize=32)
def _generators(dims: tuple[int, int, int], decay: DecayRates) -> Generators:
    return Generators(ModeLayout(dims), decay)


def build_generators(layout: ModeLayout, decay: DecayRates) -> Generators:
    return _generators(layout.dims, decay)


# ---------------------------------------------------------------------------
# reference right-hand side (dense, used for tests and the adaptive method)


def hamiltonian_at(tau: float, schedule: PulseSchedule, layout: ModeLayout) -> np.ndarray:
    """Dense beam-splitter Hamiltonian H(tau) on the joint space."""
    g1, g2 = schedule.values(tau)
    dims = layout.dims
    a1 = fockspace.embed(fockspace.annihilation(dims[0]), 0, layout)
    b = fockspace.embed(fockspace.annihilation(dims[1]), 1, layout)
    a2 = fockspace.embed(fockspace.annihilation(dims[2]), 2, layout)
    h = g1 * (a1 @ b.conj().T + a1.conj().T @ b)
    h += g2 * (a2 @ b.conj().T + a2.conj().T @ b)
    return h


def lindblad_rhs(
    state: QState, tau: float, schedule: PulseSchedule, decay: DecayRates
) -> np.ndarray:
    """d(rho)/d(tau) = -i[H, rho] + sum_k rate_k D[a_k] rho, dense reference."""
    gen = build_generators(state.layout, decay)
    g1, g2 = schedule.values(tau)
    return _rhs_dense(state.rho, gen, g1, g2)


def _rhs_dense(rho: np.ndarray, gen: Generators, g1: float, g2: float) -> np.ndarray:
    m = (-1j * g1) * (gen.h1_csr @ rho) + (-1j * g2) * (gen.h2_csr @ rho)
    m -= (0.5 * gen.ndiag)[:, None] * rho
    out = m + m.conj().T
    for c in gen.jump_csr:
        t = c @ rho
        out += c @ t.conj().T
    return out


# ---------------------------------------------------------------------------
# evolution


def _stage_couplings(schedule, ta, tb, nsteps):
    """Coupling values on the RK4 half-step grid of [ta, tb].

    Stage times that coincide with a schedule breakpoint are nudged into the
    interval interior so that piecewise-constant segments are integrated with
    the segment's own coupling values.
    """
    taus = ta + (tb - ta) * np.arange(2 * nsteps + 1) / (2 * nsteps)
    bps = schedule.breakpoints()
    g1 = np.empty(taus.size)
    g2 = np.empty(taus.size)
    mid = 0.5 * (ta + tb)
    for i, t in enumerate(taus):
        te = t
        if bps and min(abs(t - bp) for bp in bps) < 1e-12:
            te = t + 1e-9 * (1.0 if mid > t else -1.0)
        g1[i], g2[i] = schedule.values(te)
    return g1, g2


def _event_grid(t_span, sample_count, breakpoints):
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (math.isfinite(t0) and math.isfinite(t1)) or t1 <= t0:
        raise ValueError(f"invalid time span {t_span}")
    samples = np.linspace(t0, t1, sample_count)
    events = set(np.round(samples, 15))
    for bp in breakpoints:
        if t0 < bp < t1:
            events.add(round(float(bp), 15))
    return samples, np.array(sorted(events))


def _propagate_adaptive(rho, gen, schedule, ta, tb, options):
    """Embedded Cash-Karp RK45 with elementwise error control on [ta, tb]."""
    a = [
        [],
        [1 / 5],
        [3 / 40, 9 / 40],
        [3 / 10, -9 / 10, 6 / 5],
        [-11 / 54, 5 / 2, -70 / 27, 35 / 27],
        [1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096],
    ]
    c = [0, 1 / 5, 3 / 10, 3 / 5, 1, 7 / 8]
    b5 = [37 / 378, 0, 250 / 621, 125 / 594, 0, 512 / 1771]
    b4 = [2825 / 27648, 0, 18575 / 48384, 13525 / 55296, 277 / 14336, 1 / 4]

    def rhs(t, y):
        g1, g2 = schedule.values(t)
        return _rhs_dense(y, gen, g1, g2)

    t = ta
    dt = min(options.dt_max, tb - ta)
    dt_min = max((tb - ta), 1.0) * 1e-13
    while t < tb - 1e-14:
        dt = min(dt, tb - t)
        if dt < dt_min:
            raise IntegrationError(f"step size underflow at tau = {t:.6g}")
        ks = []
        for i in range(6):
            y = rho
            if ks:
                y = rho + dt * sum(aij * kj for aij, kj in zip(a[i], ks))
            ks.append(rhs(t + c[i] * dt, y))
        y5 = rho + dt * sum(bi * ki for bi, ki in zip(b5, ks))
        y4 = rho + dt * sum(bi * ki for bi, ki in zip(b4, ks))
        err = np.max(np.abs(y5 - y4))
        scale = options.abs_tol + options.rel_tol * max(1.0, np.max(np.abs(y5)))
        if err <= scale:
            rho = y5
            t += dt
            dt *= min(5.0, max(0.2, 0.9 * (scale / max(err, 1e-300)) ** 0.2))
        else:
            dt *= max(0.2, 0.9 * (scale / err) ** 0.25)
    return rho


def evolve(
    initial: QState,
    schedule: PulseSchedule,
    decay: DecayRates,
    t_span: tuple[float, float],
    options: IntegratorOptions | None = None,
    sample_count: int = 601,
    fidelity_reference: np.ndarray | None = None,
    phase_correction: bool = True,
) -> SimResult:
    """Integrate the master equation and sample occupations / fidelity.

    The fidelity series compares the reduced state of the optical mode a2
    (phase-corrected by the parity unitary exp(i pi n) when requested) against
    ``fidelity_reference``, which defaults to the initial reduced state of the
    microwave mode a1.
    """
    options = options or IntegratorOptions()
    initial.validate()
    layout = initial.layout
    gen = build_generators(layout, decay)

    if fidelity_reference is None:
        fidelity_reference = metrics.partial_trace(initial, keep=0)

    samples, events = _event_grid(t_span, sample_count, schedule.breakpoints())
    sample_set = set(np.round(samples, 15))

    rho = np.ascontiguousarray(initial.rho, dtype=complex)
    nsamp = samples.size
    n_series = np.zeros((3, nsamp))
    g1_series = np.zeros(nsamp)
    g2_series = np.zeros(nsamp)
    theta_series = np.zeros(nsamp)
    dark_series = np.zeros(nsamp)
    fid_series = np.zeros(nsamp)
    eig_checkpoints = set(
        np.round(np.linspace(0, nsamp - 1, min(16, nsamp))).astype(int)
    )

    theta_prev = 0.0
    isamp = 0

    def record(tau, rho):
        nonlocal theta_prev, isamp
        diag = np.real(np.diag(rho))
        for k in range(3):
            n_series[k, isamp] = float(gen.num_diags[k] @ diag)
        g1, g2 = schedule.values(tau)
        g1_series[isamp] = g1
        g2_series[isamp] = g2
        if g1 == 0.0 and g2 == 0.0:
            theta = theta_prev  # hold-last convention when both couplings vanish
        else:
            theta = math.atan2(g1, g2)
        theta_prev = theta
        theta_series[isamp] = theta
        cross = complex(np.sum(gen.a1dag_a2.multiply(rho.T)))
        dark_series[isamp] = (
            math.cos(theta) ** 2 * n_series[0, isamp]
            + math.sin(theta) ** 2 * n_series[2, isamp]
            - 2.0 * math.sin(theta) * math.cos(theta) * cross.real
        )
        rho2 = metrics.partial_trace_matrix(rho, layout, keep=2)
        if phase_correction:
            parity = (-1.0) ** np.arange(rho2.shape[0])
            rho2 = rho2 * np.outer(parity, parity)
        fid_series[isamp] = metrics.uhlmann_fidelity(fidelity_reference, rho2)

        tr = rho.trace()
        if abs(tr - 1.0) > 1e-7:
            raise IntegrationError(f"trace deviation {abs(tr-1.0):.3e} at tau = {tau:.6g}")
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > 1e-8:
            raise IntegrationError(f"Hermiticity loss {herm:.3e} at tau = {tau:.6g}")
        if isamp in eig_checkpoints:
            wmin = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
            if wmin < -1e-6:
                raise IntegrationError(
                    f"negative eigenvalue {wmin:.3e} at tau = {tau:.6g}"
                )
        isamp += 1

    record(samples[0], rho)
    for ta, tb in zip(events[:-1], events[1:]):
        if options.method == "adaptive":
            rho = _propagate_adaptive(rho, gen, schedule, ta, tb, options)
        else:
            nsteps = max(1, math.ceil((tb - ta) / options.dt_max - 1e-12))
            dt = (tb - ta) / nsteps
            g1s, g2s = _stage_couplings(schedule, ta, tb, nsteps)
            rho = backend.propagate(
                rho,
                gen.h_indptr,
                gen.h_indices,
                gen.h1_data,
                gen.h2_data,
                gen.jump_arrays,
                gen.ndiag,
                g1s,
                g2s,
                dt,
                nsteps,
            )
        if round(float(tb), 15) in sample_set:
            record(tb, rho)

    final = QState(layout, 0.5 * (rho + rho.conj().T))
    return SimResult(
        times=samples,
        n_a1=n_series[0],
        n_b=n_series[1],
        n_a2=n_series[2],
        g1=g1_series,
        g2=g2_series,
        theta=theta_series,
        n_dark=dark_series,
        fidelity=fid_series,
        final_state=final,
    )
