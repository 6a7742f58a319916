"""Desk-scale validation of the effective three-mode model.

Builds the full four-level spin/cavity interaction Hamiltonian for a handful
of spins, compares its dynamics against the adiabatically eliminated
beam-splitter model, quantifies the Holstein-Primakoff matrix-element error,
and provides the three-level (cold-atom) variant.

Spin level ordering for the four-level model: |a>, |b>, |c>, |e| -> 0..3.
Tensor order of the full model: (cavity a1, cavity a2, spin 1, ..., spin N).
"""

from __future__ import annotations

import cmath
import itertools
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import fockspace
from .dynamics import ConstantPulse, DecayRates, IntegratorOptions, evolve
from .fockspace import ModeLayout
from .protocols import initial_states

LEVELS4 = {"a": 0, "b": 1, "c": 2, "e": 3}
LEVELS3 = {"b": 0, "c": 1, "e": 2}

MAX_FULL_DIM = 4096
DETUNING_RATIO_WARN = 5.0


@dataclass(frozen=True)
class MicroConfig:
    """Microscopic couplings and detunings (all rates in the same units)."""

    n_spins: int = 1
    g1: float = 2.0
    g2: float = 2.0
    omega1: float = 2.5
    omega2: float = 2.5
    delta1: float = 50.0
    delta2: float = 50.0
    cavity_dims: tuple[int, int] = (2, 2)
    # inhomogeneous per-spin detuning offsets; kept at zero (ignored regime)
    delta1_offsets: tuple[float, ...] = ()
    delta2_offsets: tuple[float, ...] = ()

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError("need at least one spin")
        if any(off != 0 for off in self.delta1_offsets + self.delta2_offsets):
            warnings.warn("nonzero inhomogeneous offsets are outside the validated scope")
        for delta, drives, label in (
            (self.delta1, (self.omega1, self.g1), "1"),
            (self.delta2, (self.omega2, self.g2), "2"),
        ):
            for v in drives:
                if v != 0 and abs(delta) / abs(v) < DETUNING_RATIO_WARN:
                    warnings.warn(
                        f"large-detuning condition weak on branch {label}: "
                        f"|Delta|/|drive| = {abs(delta)/abs(v):.2f}"
                    )


def effective_couplings(config: MicroConfig) -> tuple[float, float]:
    """Collective Raman rates (G1, G2) = (Omega1 sqrt(N) g1/Delta1, Omega2 sqrt(N) g2/Delta2)."""
    if config.delta1 == 0 or config.delta2 == 0:
        raise ValueError("detunings must be nonzero")
    root_n = math.sqrt(config.n_spins)
    g1 = config.omega1 * root_n * config.g1 / config.delta1
    g2 = config.omega2 * root_n * config.g2 / config.delta2
    return g1, g2


def three_level_effective(config: MicroConfig) -> tuple[float, float]:
    """Effective pair for the three-level model: direct magnetic G1' = sqrt(N) g1."""
    if config.delta2 == 0:
        raise ValueError("optical detuning must be nonzero")
    root_n = math.sqrt(config.n_spins)
    return root_n * config.g1, config.omega2 * root_n * config.g2 / config.delta2


# ---------------------------------------------------------------------------
# full-model Hamiltonians


def _spin_op(level_count: int, row: int, col: int, j: int, n_spins: int) -> np.ndarray:
    op = np.zeros((level_count, level_count), dtype=complex)
    op[row, col] = 1.0
    factors = [np.eye(level_count, dtype=complex)] * n_spins
    factors[j] = op
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def _collective(level_count: int, row: int, col: int, n_spins: int) -> np.ndarray:
    return sum(_spin_op(level_count, row, col, j, n_spins) for j in range(n_spins))


class _FullModel:
    """Static pieces of H(t) = e^{-i Delta1 t} A + e^{i Delta2 t} B + h.c.

    Both intermediate levels sit *above* the ground doublet by their detuning:
    A is written with lowering operators (|b><a|, photon-absorbing |c><a|), so
    its phase is e^{-i Delta1 t}, while B uses raising operators (|e><b|,
    |e><c|) and carries e^{+i Delta2 t}.  With a common sign the ac-Stark
    shifts of |b> and |c> from the two classical drives are equal when
    Omega1^2/Delta1 = Omega2^2/Delta2 and drop out of the two-photon
    resonance; only the photon-number-dependent g^2/Delta shifts remain.
    """

    def __init__(self, config: MicroConfig, levels: dict[str, int]):
        self.config = config
        self.levels = levels
        nlev = len(levels)
        d1, d2 = config.cavity_dims
        n = config.n_spins
        dim = d1 * d2 * nlev**n
        if dim > MAX_FULL_DIM:
            raise ValueError(f"full-model dimension {dim} exceeds guard {MAX_FULL_DIM}")
        self.dim = dim
        spin_eye = np.eye(nlev**n, dtype=complex)
        a1 = np.kron(np.kron(fockspace.annihilation(d1), np.eye(d2)), spin_eye)
        a2 = np.kron(np.kron(np.eye(d1), fockspace.annihilation(d2)), spin_eye)
        cav_eye = np.eye(d1 * d2, dtype=complex)

        def lift(spin_matrix):
            return np.kron(cav_eye, spin_matrix)

        lv = levels
        if "a" in lv:  # four-level model
            j_ca = lift(_collective(nlev, lv["c"], lv["a"], n))
            j_ba = lift(_collective(nlev, lv["b"], lv["a"], n))
            self.a_part = config.g1 * (a1 @ j_ca) + config.omega1 * j_ba
        else:  # three-level model: resonant magnetic coupling carries no phase
            j_cb = lift(_collective(nlev, lv["c"], lv["b"], n))
            self.static = config.g1 * (a1 @ j_cb)
            self.a_part = None
        j_eb = lift(_collective(nlev, lv["e"], lv["b"], n))
        j_ec = lift(_collective(nlev, lv["e"], lv["c"], n))
        self.b_part = config.g2 * (a2 @ j_eb) + config.omega2 * j_ec
        self.n1 = np.real(np.diag(a1.conj().T @ a1))
        self.n2 = np.real(np.diag(a2.conj().T @ a2))
        # per-level total populations
        self.level_diags = {}
        for name, idx in levels.items():
            diag = np.zeros(nlev**n)
            for j in range(n):
                diag += np.real(np.diag(_spin_op(nlev, idx, idx, j, n)))
            self.level_diags[name] = np.kron(np.ones(d1 * d2), diag)

    def hamiltonian(self, t: float) -> np.ndarray:
        h = cmath.exp(1j * self.config.delta2 * t) * self.b_part
        if self.a_part is not None:
            h = h + cmath.exp(-1j * self.config.delta1 * t) * self.a_part
        else:
            h = h + self.static
        return h + h.conj().T


def full_hamiltonian_at(t: float, config: MicroConfig) -> np.ndarray:
    """Four-level interaction Hamiltonian with explicit oscillating phases."""
    return _FullModel(config, LEVELS4).hamiltonian(t)


def three_level_hamiltonian_at(t: float, config: MicroConfig) -> np.ndarray:
    return _FullModel(config, LEVELS3).hamiltonian(t)


def _evolve_state(model: _FullModel, psi0: np.ndarray, times: np.ndarray, dt_max: float):
    """Fixed-step RK4 Schroedinger propagation, sampled at ``times``."""
    psi = psi0.astype(complex)
    out = [psi.copy()]

    def rhs(t, y):
        return -1j * (model.hamiltonian(t) @ y)

    for ta, tb in zip(times[:-1], times[1:]):
        nsteps = max(1, math.ceil((tb - ta) / dt_max - 1e-12))
        dt = (tb - ta) / nsteps
        for s in range(nsteps):
            t = ta + s * dt
            k1 = rhs(t, psi)
            k2 = rhs(t + dt / 2, psi + dt / 2 * k1)
            k3 = rhs(t + dt / 2, psi + dt / 2 * k2)
            k4 = rhs(t + dt, psi + dt * k3)
            psi = psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(psi.copy())
    return np.array(out)


def _single_setting_deviation(config: MicroConfig, tau_span, samples, levels):
    """Run full vs effective model from (one photon in a1, spins in |b>)."""
    model = _FullModel(config, levels)
    d1, d2 = config.cavity_dims
    nlev = len(levels)
    n = config.n_spins
    # index of |1>_a1 |0>_a2 |b...b>
    spin_idx = 0
    for _ in range(n):
        spin_idx = spin_idx * nlev + levels["b"]
    psi0 = np.zeros(model.dim, dtype=complex)
    psi0[(1 * d2 + 0) * nlev**n + spin_idx] = 1.0

    times = np.linspace(tau_span[0], tau_span[1], samples)
    dt_max = min(2e-3, 0.05 / max(abs(config.delta1), abs(config.delta2), 1.0))
    states = _evolve_state(model, psi0, times, dt_max)
    probs = np.abs(states) ** 2
    n1_full = probs @ model.n1
    n2_full = probs @ model.n2
    leak_names = [name for name in ("a", "e") if name in levels]
    leakage = sum(probs @ model.level_diags[name] for name in leak_names)

    if "a" in levels:
        geff = effective_couplings(config)
    else:
        geff = three_level_effective(config)
    layout = ModeLayout((2, 2, 2))
    initial, _ = initial_states("fock1", layout)
    res = evolve(
        initial,
        ConstantPulse(*geff),
        DecayRates(),
        tau_span,
        options=IntegratorOptions(dt_max=1e-3),
        sample_count=samples,
    )
    dev = max(
        float(np.max(np.abs(n1_full - res.n_a1))),
        float(np.max(np.abs(n2_full - res.n_a2))),
    )
    return dev, float(np.max(leakage))


@dataclass
class AdiabaticReport:
    detuning_scales: tuple[float, float]
    deviations: tuple[float, float]
    leakages: tuple[float, float]
    exponent: float


def _scaled(config: MicroConfig, scale: float) -> MicroConfig:
    """Scale both detunings, rescaling the Rabi drives to keep (G1, G2) fixed."""
    return replace(
        config,
        delta1=config.delta1 * scale,
        delta2=config.delta2 * scale,
        omega1=config.omega1 * scale,
        omega2=config.omega2 * scale,
    )


def adiabatic_elimination_check(
    config: MicroConfig | None = None,
    tau_span: tuple[float, float] = (0.0, 22.0),
    samples: int = 111,
    scales: tuple[float, float] = (1.0, 2.0),
    levels: dict[str, int] = LEVELS4,
) -> AdiabaticReport:
    """Compare full and effective dynamics at two detuning settings.

    Reports the maximum photon-occupation deviation, the population leaked
    into the eliminated levels, and the fitted power of the deviation in the
    detuning scale (expected near 2).
    """
    config = config or MicroConfig()
    devs, leaks = [], []
    for s in scales:
        dev, leak = _single_setting_deviation(_scaled(config, s), tau_span, samples, levels)
        devs.append(dev)
        leaks.append(leak)
    ratio = scales[1] / scales[0]
    exponent = math.log(devs[0] / devs[1]) / math.log(ratio)
    return AdiabaticReport(
        detuning_scales=tuple(scales),
        deviations=tuple(devs),
        leakages=tuple(leaks),
        exponent=exponent,
    )


# ---------------------------------------------------------------------------
# Holstein-Primakoff accuracy


def holstein_primakoff_error(n_spins: int, n_excitations: int) -> float:
    """Relative error 1 - sqrt(1 - n/N) of the bosonized collective raising
    matrix element <n+1| J_cb |n> ~ sqrt(N) sqrt(n+1)."""
    if not 0 <= n_excitations < n_spins:
        raise ValueError(f"need 0 <= n < N, got n={n_excitations}, N={n_spins}")
    return 1.0 - math.sqrt(1.0 - n_excitations / n_spins)


def dicke_ladder_matrix_element(n_spins: int, n_excitations: int) -> float:
    """<n+1| J_cb |n> computed by explicit construction on the 2^N product space.

    Each spin is restricted to {|b>, |c>}; |n> is the normalized symmetric
    state with n spins excited to |c>.
    """
    if not 0 <= n_excitations < n_spins:
        raise ValueError(f"need 0 <= n < N, got n={n_excitations}, N={n_spins}")

    def dicke(n_exc):
        vec = np.zeros(2**n_spins)
        for positions in itertools.combinations(range(n_spins), n_exc):
            idx = sum(1 << (n_spins - 1 - p) for p in positions)
            vec[idx] = 1.0
        return vec / np.linalg.norm(vec)

    ket = dicke(n_excitations)
    bra = dicke(n_excitations + 1)
    # J_cb flips one |b> (0 bit) to |c> (1 bit) at a time
    out = np.zeros_like(ket)
    for idx in np.nonzero(ket)[0]:
        for p in range(n_spins):
            bit = 1 << (n_spins - 1 - p)
            if not idx & bit:
                out[idx | bit] += ket[idx]
    return float(bra @ out)
