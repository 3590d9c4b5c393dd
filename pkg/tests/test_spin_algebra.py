import math

import numpy as np
import pytest
from conftest import random_density, random_hermitian
from oracles import brute_partial_trace, taylor_expm

from nqr_entanglement.errors import BadDimension, NotHermitian
from nqr_entanglement.spin_algebra import (
    SPIN_3_2,
    SPIN_HALF,
    SpinSystem,
    commutator,
    hermitian_eig,
    is_hermitian,
    is_unitary,
    matrix_exp_hermitian,
    partial_trace,
    spin_operators,
)

SPINS = [SpinSystem.from_spin(s) for s in (0.5, 1, 1.5, 2, 2.5)]
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]])
PAULI_Z = np.diag([1.0, -1.0]).astype(complex)


def test_spin_system_dimension():
    assert SPIN_3_2.dim == 4
    assert SPIN_3_2.spin == 1.5
    assert SpinSystem.from_spin(2.5).dim == 6
    with pytest.raises(ValueError):
        SpinSystem(0)
    with pytest.raises(ValueError):
        SpinSystem.from_spin(0.3)


def test_spin_half_is_half_pauli():
    ops = spin_operators(SPIN_HALF)
    np.testing.assert_allclose(ops.ix, PAULI_X / 2, atol=1e-15)
    np.testing.assert_allclose(ops.iy, PAULI_Y / 2, atol=1e-15)
    np.testing.assert_allclose(ops.iz, PAULI_Z / 2, atol=1e-15)


def test_spin_three_halves_matrices():
    ops = spin_operators(SPIN_3_2)
    np.testing.assert_array_equal(np.diag(ops.iz).real, [1.5, 0.5, -0.5, -1.5])
    assert ops.i_plus[0, 1] == pytest.approx(math.sqrt(3))
    assert ops.i_plus[1, 2] == pytest.approx(2.0)
    np.testing.assert_allclose(ops.i_minus, ops.i_plus.conj().T)
    np.testing.assert_allclose(ops.ix + 1j * ops.iy, ops.i_plus, atol=1e-15)


@pytest.mark.parametrize("spin", SPINS, ids=lambda s: f"2I={s.two_i}")
def test_commutation_relations(spin):
    ops = spin_operators(spin)
    tol = 1e-12
    assert np.max(np.abs(commutator(ops.ix, ops.iy) - 1j * ops.iz)) < tol
    assert np.max(np.abs(commutator(ops.iy, ops.iz) - 1j * ops.ix)) < tol
    assert np.max(np.abs(commutator(ops.iz, ops.ix) - 1j * ops.iy)) < tol
    j = spin.spin
    assert np.max(np.abs(ops.i_squared - j * (j + 1) * np.eye(spin.dim))) < tol


def test_cached_operators_are_read_only():
    ops = spin_operators(SPIN_3_2)
    with pytest.raises(ValueError):
        ops.iz[0, 0] = 7


def test_hermitian_eig_simple_cases():
    w, _ = hermitian_eig(np.diag([1.0, 2.0]))
    np.testing.assert_allclose(w, [1, 2])
    w, _ = hermitian_eig(PAULI_X)
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)


def test_hermitian_eig_reconstruction(rng):
    for _ in range(100):
        m = random_hermitian(rng, 4)
        w, v = hermitian_eig(m)
        assert np.all(np.diff(w) >= 0)
        assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - m)) < 1e-11
        assert np.max(np.abs(v.conj().T @ v - np.eye(4))) < 1e-11


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(BadDimension):
        hermitian_eig(np.zeros((2, 3)))
    with pytest.raises(BadDimension):
        hermitian_eig(np.eye(17))


def test_hermiticity_predicates():
    assert is_hermitian(PAULI_Y)
    assert not is_hermitian(PAULI_Y + 1e-9 * np.array([[0, 1], [0, 0]]))
    assert is_unitary(PAULI_Y)
    assert not is_unitary(2 * PAULI_Y)


def test_matrix_exp_trivial_cases():
    np.testing.assert_allclose(matrix_exp_hermitian(np.zeros((4, 4)), 3.7), np.eye(4), atol=1e-15)
    out = matrix_exp_hermitian(np.diag([0.3, -1.2]), 2.0)
    np.testing.assert_allclose(out, np.diag(np.exp([0.6, -2.4])), rtol=1e-14, atol=1e-15)


def test_matrix_exp_against_taylor(rng):
    for _ in range(50):
        m = random_hermitian(rng, 4)
        m = 0.9 * m / np.linalg.norm(m, 2)
        assert np.max(np.abs(matrix_exp_hermitian(m, 1.0) - taylor_expm(m))) < 1e-10


def test_matrix_exp_inverse_pair(rng):
    for _ in range(50):
        # exp(s m) exp(-s m) amplifies roundoff by ~exp(2|s| ||m||); keep that moderate
        m = random_hermitian(rng, 4)
        m = 2.0 * m / np.linalg.norm(m, 2)
        s = rng.uniform(-2, 2)
        prod = matrix_exp_hermitian(m, s) @ matrix_exp_hermitian(m, -s)
        assert np.max(np.abs(prod - np.eye(4))) < 1e-10


def test_matrix_exp_imaginary_scale_is_unitary():
    u = matrix_exp_hermitian(spin_operators(SPIN_3_2).iy, -1j * 0.94)
    assert is_unitary(u)


def test_partial_trace_product_and_bell():
    ket00 = np.zeros(4)
    ket00[0] = 1
    np.testing.assert_allclose(partial_trace(np.outer(ket00, ket00), "A"), np.diag([1, 0]))
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    for keep in "AB":
        np.testing.assert_allclose(partial_trace(np.outer(bell, bell), keep), np.eye(2) / 2,
                                   atol=1e-15)


def test_partial_trace_index_convention():
    # |01>: A in |0>, B in |1>
    rho = np.zeros((4, 4))
    rho[1, 1] = 1
    np.testing.assert_array_equal(partial_trace(rho, "A").real, np.diag([1, 0]))
    np.testing.assert_array_equal(partial_trace(rho, "B").real, np.diag([0, 1]))


def test_partial_trace_against_brute_force(rng):
    for _ in range(100):
        rho = random_density(rng)
        for keep in "AB":
            got = partial_trace(rho, keep)
            assert np.max(np.abs(got - brute_partial_trace(rho, keep))) < 1e-14
            assert abs(np.trace(got) - np.trace(rho)) < 1e-12
            assert is_hermitian(got)


def test_partial_trace_errors():
    with pytest.raises(BadDimension):
        partial_trace(np.eye(2) / 2)
    with pytest.raises(BadDimension):
        partial_trace(np.eye(4))
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, "C")
