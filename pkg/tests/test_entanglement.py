import math

import numpy as np
import pytest
from conftest import random_density, random_unitary
from hypothesis import given
from hypothesis import strategies as st
from oracles import binary_entropy_eof, mp_concurrence, mp_entropy, mp_thermal_state

from nqr_entanglement.entanglement import (
    SPIN_FLIP,
    QubitMapping,
    concurrence,
    entanglement_of_formation,
    measure_all,
    spin_flip,
    subsystem_entropy,
)
from nqr_entanglement.errors import (
    BadDimension,
    InvalidDensityMatrix,
    NonphysicalSpectrum,
    OutOfRange,
)
from nqr_entanglement.model import ModelParams, Orientation, thermal_state
from nqr_entanglement.spin_algebra import SPIN_3_2

BELL = np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2
KET00 = np.diag([1.0, 0, 0, 0])
MIXED = np.eye(4) / 4


def pure(psi):
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_ket(rng):
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    return psi / np.linalg.norm(psi)


class TestSpinFlip:
    def test_matrix(self):
        np.testing.assert_array_equal(SPIN_FLIP, SPIN_FLIP.T)
        np.testing.assert_array_equal(SPIN_FLIP @ SPIN_FLIP, np.eye(4))
        sy = np.array([[0, -1j], [1j, 0]])
        np.testing.assert_allclose(SPIN_FLIP, np.kron(sy, sy))

    def test_examples(self):
        np.testing.assert_allclose(spin_flip(MIXED), MIXED)
        np.testing.assert_allclose(spin_flip(BELL), BELL)
        np.testing.assert_allclose(spin_flip(KET00), np.diag([0, 0, 0, 1.0]))

    def test_involution(self, rng):
        for _ in range(50):
            rho = random_density(rng)
            assert np.max(np.abs(spin_flip(spin_flip(rho)) - rho)) < 1e-14

    def test_dimension(self):
        with pytest.raises(BadDimension):
            spin_flip(np.eye(2))


class TestConcurrence:
    def test_bell_and_mixed(self):
        assert concurrence(BELL)[0] == pytest.approx(1.0, abs=1e-12)
        assert concurrence(MIXED)[0] == 0.0

    def test_partially_entangled_pure_state(self):
        c, nu = concurrence(pure([0.6, 0, 0, 0.8]))
        assert c == pytest.approx(0.96, abs=1e-12)
        assert np.all(np.diff(nu) <= 0)

    def test_two_qubit_werner_state(self):
        # Werner state p|Bell> + (1-p) I/4 has C = max(0, (3p - 1)/2)
        for p in (0.2, 1 / 3, 0.5, 0.9):
            rho = p * BELL + (1 - p) * MIXED
            assert concurrence(rho)[0] == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)

    def test_nu_squares_are_eigenvalues_of_r(self, rng):
        for _ in range(50):
            rho = random_density(rng)
            _, nu = concurrence(rho)
            lam = np.sort(np.linalg.eigvals(rho @ spin_flip(rho)).real)[::-1]
            np.testing.assert_allclose(nu ** 2, lam, atol=1e-12)

    def test_bounds(self, rng):
        for _ in range(500):
            rank = int(rng.integers(1, 5))
            c, _ = concurrence(random_density(rng, rank=rank))
            assert 0.0 <= c <= 1.0

    def test_qubit_swap_invariance(self, rng):
        swap = QubitMapping((0, 2, 1, 3))
        for _ in range(100):
            rho = random_density(rng)
            assert abs(concurrence(rho)[0] - concurrence(rho, swap)[0]) < 1e-10

    def test_local_unitary_invariance(self, rng):
        for _ in range(100):
            rho = random_density(rng, rank=int(rng.integers(1, 5)))
            w = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
            moved = w @ rho @ w.conj().T
            assert abs(concurrence(rho)[0] - concurrence(moved)[0]) < 1e-9

    def test_mapping_permutes_basis(self):
        # spin levels |3/2> and |-1/2> superposed; mapped to |00> + |11> by 0->0, 2->3
        rho = pure([1, 0, 1, 0])
        assert concurrence(rho)[0] == pytest.approx(0.0, abs=1e-12)
        assert concurrence(rho, QubitMapping((0, 1, 3, 2)))[0] == pytest.approx(1.0, abs=1e-12)

    def test_thermal_point_against_oracle(self):
        p = ModelParams(2.0, 6.0, 0.14, Orientation(0.94, 0.0))
        c, nu = concurrence(thermal_state(SPIN_3_2, p))
        c_ref, nu_ref = mp_concurrence(mp_thermal_state(2, 6, 0.14, 0.94, 0))
        assert c == pytest.approx(float(c_ref), abs=1e-13)
        np.testing.assert_allclose(nu, [float(x) for x in nu_ref], atol=1e-13)
        assert c == pytest.approx(0.25136621622348488, abs=1e-13)

    def test_zero_field_is_separable(self):
        for beta, eta, theta, phi in [(8, 0.92, 1.0, 0.3), (2, 0.14, 0.94, 0), (12, 0.5, 2.0, 4)]:
            rho = thermal_state(SPIN_3_2, ModelParams(0.0, beta, eta, Orientation(theta, phi)))
            assert concurrence(rho)[0] < 1e-10

    def test_batched_matches_single(self, rng):
        rhos = np.array([random_density(rng) for _ in range(10)])
        cs, nus = concurrence(rhos)
        for k in range(10):
            c, nu = concurrence(rhos[k])
            assert cs[k] == c
            np.testing.assert_array_equal(nus[k], nu)

    def test_invalid_inputs(self):
        with pytest.raises(InvalidDensityMatrix):
            concurrence(np.eye(4))
        with pytest.raises(InvalidDensityMatrix):
            concurrence(np.diag([0.5, 0.7, -0.2, 0.0]))
        with pytest.raises(InvalidDensityMatrix):
            concurrence(BELL + 1e-6j * np.triu(np.ones((4, 4)), 1))
        with pytest.raises(BadDimension):
            concurrence(np.eye(3) / 3)

    def test_nonphysical_spectrum(self):
        # validation already bounds negative eigenvalues by 1e-10, so the
        # spectrum check is exercised directly with a clearly non-PSD matrix
        from nqr_entanglement.entanglement import _check_flip_spectrum

        _check_flip_spectrum(BELL)
        # rho*rho_tilde is diag(-0.14, 0.06, 0.06, -0.14)
        bad = np.diag([0.7, 0.3, 0.2, -0.2]).astype(complex)
        with pytest.raises(NonphysicalSpectrum):
            _check_flip_spectrum(bad)


class TestEntanglementOfFormation:
    def test_endpoints(self):
        assert entanglement_of_formation(0.0) == 0.0
        assert entanglement_of_formation(1.0) == pytest.approx(1.0, abs=1e-15)

    def test_value(self):
        assert entanglement_of_formation(0.96) == pytest.approx(binary_entropy_eof(0.96), abs=1e-14)
        assert entanglement_of_formation(0.96) == pytest.approx(0.9427, abs=5e-5)

    def test_monotone_on_grid(self):
        e = entanglement_of_formation(np.linspace(0, 1, 1001))
        assert np.all(np.diff(e) >= 0)

    def test_small_concurrence_accuracy(self):
        # leading order E ~ (c^2/4) log2(4/c^2) + c^2/(4 ln 2)
        c = 1e-6
        x = c * c / 4
        expected = (-x * math.log(x) + x) / math.log(2)
        assert entanglement_of_formation(c) == pytest.approx(expected, rel=1e-6)

    def test_out_of_range(self):
        for bad in (-0.1, 1.0001, float("nan")):
            with pytest.raises(OutOfRange):
                entanglement_of_formation(bad)


@given(st.floats(0, 1), st.floats(0, 1))
def test_eof_monotone(c1, c2):
    lo, hi = sorted((c1, c2))
    assert entanglement_of_formation(lo) <= entanglement_of_formation(hi)


class TestSubsystemEntropy:
    def test_examples(self):
        assert subsystem_entropy(BELL, "A") == pytest.approx(1.0, abs=1e-12)
        assert subsystem_entropy(KET00, "A") == 0.0
        assert subsystem_entropy(MIXED, "B") == pytest.approx(1.0, abs=1e-12)

    def test_thermal_point_against_oracle(self):
        rho = thermal_state(SPIN_3_2, ModelParams(2.0, 6.0, 0.14, Orientation(0.94, 0.0)))
        ref = mp_thermal_state(2, 6, 0.14, 0.94, 0)
        assert subsystem_entropy(rho, "A") == pytest.approx(float(mp_entropy(ref, "A")), abs=1e-13)
        assert subsystem_entropy(rho, "B") == pytest.approx(float(mp_entropy(ref, "B")), abs=1e-13)

    def test_wootters_consistency_for_pure_states(self, rng):
        for _ in range(200):
            rho = pure(random_ket(rng))
            e = entanglement_of_formation(concurrence(rho)[0])
            assert abs(e - subsystem_entropy(rho, "A")) < 1e-9
            assert abs(e - subsystem_entropy(rho, "B")) < 1e-9


class TestMeasureAll:
    def test_bell(self):
        r = measure_all(BELL)
        assert r.concurrence == pytest.approx(1, abs=1e-12)
        assert r.eof == pytest.approx(1, abs=1e-12)
        assert r.entropy_a == pytest.approx(1, abs=1e-12)
        assert r.entropy_b == pytest.approx(1, abs=1e-12)

    def test_mixed_is_not_entangled(self):
        r = measure_all(MIXED)
        assert (r.concurrence, r.eof) == (0.0, 0.0)
        assert r.entropy_a == pytest.approx(1) and r.entropy_b == pytest.approx(1)

    def test_thermal_report(self):
        rho = thermal_state(SPIN_3_2, ModelParams(2.0, 6.0, 0.14, Orientation(0.94, 0.0)))
        r = measure_all(rho)
        assert r.concurrence == pytest.approx(0.25136621622348488, abs=1e-13)
        assert r.eof == entanglement_of_formation(r.concurrence)
        assert r.concurrence == pytest.approx(max(0, r.nu[0] - sum(r.nu[1:])), abs=1e-12)
        assert set(r.to_dict()) == {"concurrence", "eof", "entropy_a", "entropy_b", "nu"}

    def test_pure_state_entropies_agree(self, rng):
        for _ in range(50):
            r = measure_all(pure(random_ket(rng)))
            assert abs(r.entropy_a - r.entropy_b) < 1e-10

    def test_eof_zero_iff_concurrence_zero(self, rng):
        for _ in range(100):
            r = measure_all(random_density(rng, rank=int(rng.integers(1, 5))))
            assert (r.eof <= 1e-12) == (r.concurrence <= 1e-12) or r.concurrence < 1e-5

    def test_non_default_mapping_is_recorded(self):
        m = QubitMapping((3, 2, 1, 0))
        assert measure_all(BELL, m).mapping == m
        assert not m.is_identity
        with pytest.raises(ValueError):
            QubitMapping((0, 0, 1, 2))
