import math

import numpy as np
import pytest

from modeswap.dynamics import ConstantPulse, DecayRates, hamiltonian_at
from modeswap.fockspace import ModeLayout, fock_state
from modeswap.oracle import (
    classical_amplitudes_rhs,
    double_swap_classical_amplitudes,
    expm_taylor,
    heisenberg_swap_amplitudes,
    liouvillian_exponential_evolve,
    liouvillian_matrix,
    lossless_coherent_fidelity,
)


def test_heisenberg_amplitudes_preserve_norm():
    a, b = heisenberg_swap_amplitudes(0.8 + 0.1j, 0.2j, 0.731, 1.3)
    assert abs(a) ** 2 + abs(b) ** 2 == pytest.approx(abs(0.8 + 0.1j) ** 2 + 0.04)


def test_heisenberg_full_swap():
    a, b = heisenberg_swap_amplitudes(1.0, 0.0, math.pi / 2, 1.0)
    assert a == pytest.approx(0.0, abs=1e-15)
    assert b == pytest.approx(-1j, abs=1e-15)


def test_liouvillian_preserves_trace():
    # vec(I)^dag L = 0 means d(tr rho)/dt = 0 for every rho
    layout = ModeLayout((2, 2, 2))
    h = hamiltonian_at(0.0, ConstantPulse(1.0, 0.4), layout)
    lv = liouvillian_matrix(h, layout, DecayRates(0.1, 0.2, 0.3))
    d = layout.total_dim
    tr_vec = np.eye(d).reshape(d * d, order="F")
    assert np.max(np.abs(tr_vec @ lv)) < 1e-12


def test_liouvillian_dimension_guard():
    layout = ModeLayout((8, 8, 8))
    h = np.zeros((512, 512))
    with pytest.raises(ValueError, match="exceeds"):
        liouvillian_matrix(h, layout, DecayRates())


def test_exponential_evolve_matches_taylor_series():
    layout = ModeLayout((2, 2, 2))
    state = fock_state((1, 0, 0), layout)
    h = hamiltonian_at(0.0, ConstantPulse(1.0, 0.0), layout)
    decay = DecayRates(0.05, 0.02, 0.0)
    tau = 0.3
    out = liouvillian_exponential_evolve(state, h, decay, tau)
    lv = liouvillian_matrix(h, layout, decay)
    d = layout.total_dim
    vec = state.rho.reshape(d * d, order="F")
    ref = (expm_taylor(tau * lv) @ vec).reshape(d, d, order="F")
    assert np.max(np.abs(out.rho - ref)) < 1e-12


def test_exponential_evolve_swaps_excitation():
    layout = ModeLayout((3, 3, 3))
    state = fock_state((1, 0, 0), layout)
    h = hamiltonian_at(0.0, ConstantPulse(1.0, 0.0), layout)
    out = liouvillian_exponential_evolve(state, h, DecayRates(), math.pi / 2)
    # excitation fully moved from a1 to the spin mode
    idx_b = 0 * 9 + 1 * 3 + 0
    assert out.rho[idx_b, idx_b] == pytest.approx(1.0, abs=1e-10)
    out.validate()


def test_classical_amplitudes_conserve_energy_lossless():
    amps = np.array([0.4 + 0.2j, -0.1j, 0.3], complex)
    dots = classical_amplitudes_rhs(amps, 0.9, 1.2, DecayRates())
    d_norm = 2 * np.sum(np.real(np.conj(amps) * dots))
    assert d_norm == pytest.approx(0.0, abs=1e-14)


def test_classical_amplitudes_damping():
    amps = np.array([1.0, 0.0, 0.0], complex)
    dots = classical_amplitudes_rhs(amps, 0.0, 0.0, DecayRates(kappa1=0.2))
    assert dots[0] == pytest.approx(-0.1)
    assert dots[1] == dots[2] == 0


def test_double_swap_classical_amplitudes_ideal():
    a1, b, a2 = double_swap_classical_amplitudes(0.7 + 0.1j)
    assert a1 == pytest.approx(0.0, abs=1e-15)
    assert b == pytest.approx(0.0, abs=1e-15)
    assert a2 == pytest.approx(-(0.7 + 0.1j), abs=1e-14)


def test_lossless_coherent_fidelity_perfect_transfer():
    assert lossless_coherent_fidelity(1.3) == pytest.approx(1.0, abs=1e-12)


def test_lossless_coherent_fidelity_timing_error():
    alpha, eps = 1.0, 0.1
    # overrunning the final swap leaves |alpha sin eps| in the spin mode and
    # shifts the optical amplitude to -alpha cos eps
    expected = math.exp(
        -abs(alpha * math.sin(eps)) ** 2 - abs(alpha * (1 - math.cos(eps))) ** 2
    )
    assert lossless_coherent_fidelity(alpha, eps) == pytest.approx(expected, abs=1e-12)
    assert lossless_coherent_fidelity(alpha, eps) < 1.0
