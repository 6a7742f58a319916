import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modeswap.fockspace import (
    DimensionError,
    ModeLayout,
    QState,
    TruncationError,
    annihilation,
    coherent_state,
    creation,
    embed,
    fock_state,
    number,
    product_state,
    superposition_state,
    vacuum_state,
)


def test_mode_layout_total_dim():
    layout = ModeLayout((2, 3, 4))
    assert layout.dims == (2, 3, 4)
    assert layout.total_dim == 24


@pytest.mark.parametrize("dims", [(2, 2), (2, 2, 2, 2), (1, 2, 2), (2, 0, 2)])
def test_mode_layout_rejects_bad_dims(dims):
    with pytest.raises(DimensionError):
        ModeLayout(dims)


def test_annihilation_matrix_elements():
    a = annihilation(5)
    for n in range(1, 5):
        assert a[n - 1, n] == pytest.approx(np.sqrt(n))
    assert np.count_nonzero(a) == 4


def test_creation_is_adjoint():
    a = annihilation(4)
    assert np.allclose(creation(4), a.conj().T)


def test_number_operator_identity():
    a = annihilation(6)
    assert np.allclose(a.conj().T @ a, number(6))


@given(d=st.integers(min_value=2, max_value=12))
@settings(max_examples=20, deadline=None)
def test_commutator_truncation_defect(d):
    # [a, a^dag] = I - d |d-1><d-1| on the truncated space
    a = annihilation(d)
    comm = a @ a.conj().T - a.conj().T @ a
    expected = np.eye(d, dtype=complex)
    expected[d - 1, d - 1] = 1 - d
    assert np.allclose(comm, expected)


def test_embed_preserves_spectrum():
    layout = ModeLayout((3, 2, 2))
    big = embed(number(3), 0, layout)
    w = np.sort(np.linalg.eigvalsh(big))
    # each eigenvalue of the single-mode operator appears dims[1]*dims[2] times
    expected = np.sort(np.repeat(np.arange(3), 4))
    assert np.allclose(w, expected)


def test_embed_rejects_mismatched_operator():
    layout = ModeLayout((3, 2, 2))
    with pytest.raises(DimensionError):
        embed(number(4), 0, layout)
    with pytest.raises(DimensionError):
        embed(number(3), 3, layout)


def test_embed_commutes_across_modes():
    layout = ModeLayout((2, 3, 2))
    x = embed(annihilation(2), 0, layout)
    y = embed(annihilation(3), 1, layout)
    assert np.allclose(x @ y, y @ x)


def test_fock_state_is_valid_and_localized():
    layout = ModeLayout((3, 3, 3))
    state = fock_state((1, 0, 2), layout)
    state.validate()
    idx = (1 * 3 + 0) * 3 + 2
    assert state.rho[idx, idx] == pytest.approx(1.0)
    assert np.trace(state.rho) == pytest.approx(1.0)


def test_fock_state_out_of_range():
    layout = ModeLayout((2, 2, 2))
    with pytest.raises(TruncationError):
        fock_state((2, 0, 0), layout)


def test_product_state_normalizes():
    layout = ModeLayout((2, 2, 2))
    state = product_state(
        [np.array([2.0, 0.0]), vacuum_state(2), vacuum_state(2)], layout
    )
    state.validate()


def test_coherent_state_norm_and_tail():
    v, tail = coherent_state(0.5, 10)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    assert tail < 1e-8
    # amplitude ratio follows alpha / sqrt(n+1)
    assert v[1] / v[0] == pytest.approx(0.5)
    assert v[2] / v[1] == pytest.approx(0.5 / np.sqrt(2))


def test_coherent_state_truncation_warns():
    with pytest.warns(UserWarning, match="tail weight"):
        _, tail = coherent_state(2.0, 4)
    assert tail > 1e-6


def test_superposition_state():
    v = superposition_state(4)
    assert v[0] == pytest.approx(1 / np.sqrt(2))
    assert v[1] == pytest.approx(1 / np.sqrt(2))
    assert np.all(v[2:] == 0)


def test_qstate_validate_rejects_bad_states():
    layout = ModeLayout((2, 2, 2))
    good = fock_state((0, 0, 0), layout)
    bad_trace = QState(layout, 2.0 * good.rho)
    with pytest.raises(ValueError, match="trace"):
        bad_trace.validate()
    nonherm = good.rho.copy()
    nonherm[0, 1] = 1.0
    with pytest.raises(ValueError, match="Hermitian"):
        QState(layout, nonherm).validate()
    negative = good.rho.copy()
    negative[1, 1] = -0.1
    negative[0, 0] = 1.1
    with pytest.raises(ValueError, match="negative eigenvalue"):
        QState(layout, negative).validate()


def test_qstate_shape_mismatch():
    layout = ModeLayout((2, 2, 2))
    with pytest.raises(DimensionError):
        QState(layout, np.eye(4, dtype=complex))
