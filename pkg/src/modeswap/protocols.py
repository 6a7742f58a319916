"""Transfer protocols: double-swap, adiabatic dark-state, and diagnostics.

Both protocols place the payload state in the microwave mode a1 with the spin
and optical modes in vacuum, then report the Uhlmann fidelity between the
evolving reduced state of a2 and the initial state of a1.  The comparison
target absorbs the deterministic phase flip a1 -> -a2 that both protocols
produce (each swap contributes -i; the adiabatic scheme follows the dark mode
from -a1 to a2), applied as the parity unitary exp(i pi n) on the reduced
state before comparing.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import fockspace, metrics
from .dynamics import (
    DecayRates,
    GaussianPulsePair,
    IntegratorOptions,
    PiecewiseSwapPulse,
    PulseSchedule,
    SimResult,
    evolve,
)
from .fockspace import ModeLayout, QState

__all__ = [
    "ProtocolSpec",
    "double_swap_schedule",
    "dark_state_schedule",
    "DARK_WINDOW",
    "GAMMA_SWEEP_DEFAULTS",
    "mixing_angle",
    "dark_mode_occupation",
    "hybrid_mode_occupations",
    "hybrid_mode_frequencies",
    "initial_states",
    "run_protocol",
    "sweep_spin_decay",
]

DEFAULT_LAYOUT = ModeLayout((6, 6, 6))
COHERENT_LAYOUT = ModeLayout((8, 8, 8))

# Dark-state pulse parameters: G1 Gaussian centered at 2.8 with width
# parameter 20, G2 = 1.45 exp(-tau^2/6).  The integration window starts at
# tau = 0, where G2 sits at its maximum; starting earlier lets the broad G1
# tail dominate the mixing angle and ruins the transfer.
DARK_DEFAULTS = (1.0, 2.8, 20.0, 1.45, 0.0, 6.0)
DARK_WINDOW = (0.0, 6.0)

GAMMA_SWEEP_DEFAULTS = (0.01, 0.03, 0.06, 0.1)


@dataclass(frozen=True)
class ProtocolSpec:
    kind: str  # "double-swap" | "dark-state"
    schedule: PulseSchedule
    window: tuple[float, float]
    initial_kind: str  # "fock1" | "superposition" | "coherent"
    decay: DecayRates
    alpha: complex = 1.0
    phase_correction: bool = True

    def __post_init__(self):
        if self.kind not in ("double-swap", "dark-state"):
            raise ValueError(f"unknown protocol kind {self.kind!r}")
        if self.initial_kind not in ("fock1", "superposition", "coherent"):
            raise ValueError(f"unknown initial state kind {self.initial_kind!r}")
        t0, t1 = self.window
        if not (math.isfinite(t0) and math.isfinite(t1) and t0 < t1):
            raise ValueError(f"invalid protocol window {self.window}")


def double_swap_schedule(g1: float, g2: float) -> tuple[PiecewiseSwapPulse, tuple[float, float]]:
    """Sequential pi/2 swaps: a1 -> b for pi/(2 G1), then b -> a2 for pi/(2 G2)."""
    if g1 <= 0 or g2 <= 0:
        raise ValueError("swap amplitudes must be > 0")
    t1 = math.pi / (2.0 * g1)
    t2 = t1 + math.pi / (2.0 * g2)
    return PiecewiseSwapPulse(g1=g1, g2=g2, t0=0.0, t1=t1, t2=t2), (0.0, t2)


def dark_state_schedule(
    a1: float = DARK_DEFAULTS[0],
    c1: float = DARK_DEFAULTS[1],
    w1: float = DARK_DEFAULTS[2],
    a2: float = DARK_DEFAULTS[3],
    c2: float = DARK_DEFAULTS[4],
    w2: float = DARK_DEFAULTS[5],
) -> GaussianPulsePair:
    return GaussianPulsePair(a1=a1, c1=c1, w1=w1, a2=a2, c2=c2, w2=w2)


def mixing_angle(tau: float, schedule: PulseSchedule, previous: float = 0.0) -> float:
    """theta = atan2(G1, G2) in [0, pi/2]; holds the previous value when both vanish."""
    g1, g2 = schedule.values(tau)
    if g1 == 0.0 and g2 == 0.0:
        return previous
    return math.atan2(g1, g2)


def _dark_mode_matrix(layout: ModeLayout, theta: float) -> np.ndarray:
    a1 = fockspace.embed(fockspace.annihilation(layout.dims[0]), 0, layout)
    a2 = fockspace.embed(fockspace.annihilation(layout.dims[2]), 2, layout)
    return -math.cos(theta) * a1 + math.sin(theta) * a2


def dark_mode_occupation(state: QState, theta: float) -> float:
    """<c_d^dag c_d> for the spin dark mode c_d = -cos(theta) a1 + sin(theta) a2."""
    cd = _dark_mode_matrix(state.layout, theta)
    val = np.trace(cd.conj().T @ cd @ state.rho)
    return float(np.real(val))


def hybrid_mode_occupations(state: QState, theta: float) -> tuple[float, float, float]:
    """Occupations of (c_d, c_+, c_-) with c_pm = (c_b +- b)/sqrt(2)."""
    layout = state.layout
    a1 = fockspace.embed(fockspace.annihilation(layout.dims[0]), 0, layout)
    b = fockspace.embed(fockspace.annihilation(layout.dims[1]), 1, layout)
    a2 = fockspace.embed(fockspace.annihilation(layout.dims[2]), 2, layout)
    cd = -math.cos(theta) * a1 + math.sin(theta) * a2
    cb = math.sin(theta) * a1 + math.cos(theta) * a2
    cp = (cb + b) / math.sqrt(2.0)
    cm = (cb - b) / math.sqrt(2.0)
    out = []
    for op in (cd, cp, cm):
        out.append(float(np.real(np.trace(op.conj().T @ op @ state.rho))))
    return tuple(out)


def hybrid_mode_frequencies(nu1: float, nu_s: float, nu2: float) -> tuple[float, float, float]:
    """Eigenfrequencies (omega_d, omega_+, omega_-) of the hybridized modes."""
    split = math.sqrt(nu1**2 + nu2**2)
    return (nu_s, nu_s + split, nu_s - split)


def initial_states(
    kind: str, layout: ModeLayout, alpha: complex = 1.0
) -> tuple[QState, np.ndarray]:
    """Joint initial state (payload in a1, others in vacuum) and the payload
    single-mode density matrix used as the fidelity target."""
    d1 = layout.dims[0]
    if kind == "fock1":
        v = np.zeros(d1, dtype=complex)
        v[1] = 1.0
    elif kind == "superposition":
        v = fockspace.superposition_state(d1)
    elif kind == "coherent":
        v, _ = fockspace.coherent_state(alpha, d1)
    else:
        raise ValueError(f"unknown initial state kind {kind!r}")
    joint = fockspace.product_state(
        [v, fockspace.vacuum_state(layout.dims[1]), fockspace.vacuum_state(layout.dims[2])],
        layout,
    )
    return joint, np.outer(v, v.conj())


def default_layout(initial_kind: str) -> ModeLayout:
    return COHERENT_LAYOUT if initial_kind == "coherent" else DEFAULT_LAYOUT


def run_protocol(
    spec: ProtocolSpec,
    layout: ModeLayout | None = None,
    options: IntegratorOptions | None = None,
    sample_count: int = 601,
) -> SimResult:
    """Run one protocol end to end and return the sampled time series."""
    layout = layout or default_layout(spec.initial_kind)
    initial, target = initial_states(spec.initial_kind, layout, spec.alpha)
    return evolve(
        initial,
        spec.schedule,
        spec.decay,
        spec.window,
        options=options,
        sample_count=sample_count,
        fidelity_reference=target,
        phase_correction=spec.phase_correction,
    )


def sweep_spin_decay(
    spec: ProtocolSpec,
    gamma_list=GAMMA_SWEEP_DEFAULTS,
    layout: ModeLayout | None = None,
    options: IntegratorOptions | None = None,
    sample_count: int = 601,
    max_workers: int = 4,
) -> list[SimResult]:
    """Rerun the protocol for each spin decay rate, in input order."""
    gamma_list = list(gamma_list)
    if any(g < 0 for g in gamma_list):
        raise ValueError("spin decay rates must be >= 0")
    specs = [
        replace(spec, decay=replace(spec.decay, gamma_s=g)) for g in gamma_list
    ]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [
            pool.submit(run_protocol, s, layout, options, sample_count) for s in specs
        ]
        return [f.result() for f in futures]
