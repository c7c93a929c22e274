"""Tests for exact channels, Choi matrices and channel algebra."""

import numpy as np
import pytest

from src.lindblad import (
    LindbladianSpec,
    QuantumChannel,
    Superoperator,
    apply_channel,
    apply_channel_with_reference,
    check_cptp,
    choi_matrix,
    exact_channel,
)
from src.numerics import (
    DensityMatrix,
    RegisterLayout,
    kron,
    maximally_entangled_vector,
    partial_trace,
    random_density_matrix,
    random_hermitian,
    random_pure_state,
    random_unit_hs_operator,
    unvec,
    vec,
)
from src.shared.exceptions import DimensionMismatchException, LindbladException

DAMPED = np.diag([1.0 - np.exp(-1.0), np.exp(-1.0)])


def random_spec(d: int, seed: int) -> LindbladianSpec:
    return LindbladianSpec.single(random_unit_hs_operator(d, seed), hamiltonian=random_hermitian(d, seed))


def choi_action(choi: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Apply the map of a normalized Choi matrix: ``d Tr_R[(x.T (x) I) C]``."""
    d = x.shape[0]
    return d * partial_trace(kron(x.T, np.eye(d)) @ choi, RegisterLayout((d, d)), [0])


class TestExactChannel:
    """Tests for exact_channel."""

    def test_zero_time_is_identity(self, amplitude_damping):
        ch = exact_channel(LindbladianSpec.single(amplitude_damping), 0.0)
        np.testing.assert_array_equal(ch.mat, np.eye(4))

    def test_amplitude_damping_closed_form(self, amplitude_damping, excited_state):
        ch = exact_channel(LindbladianSpec.single(amplitude_damping), 1.0)
        out = apply_channel(ch, DensityMatrix(excited_state))
        np.testing.assert_allclose(out.mat, DAMPED, atol=1e-10)
        assert out.mat[0, 0].real == pytest.approx(0.63212, abs=1e-5)

    @pytest.mark.parametrize("t", [0.3, 1.0, 5.0])
    def test_identity_operator_channel(self, t):
        rho = random_density_matrix(3, 2)
        ch = exact_channel(LindbladianSpec.single(np.eye(3) / np.sqrt(3)), t)
        np.testing.assert_allclose(apply_channel(ch, rho).mat, rho.mat, atol=1e-12)

    @pytest.mark.parametrize("d", [2, 3])
    def test_semigroup(self, d):
        spec = random_spec(d, 11)
        composed = exact_channel(spec, 0.7).compose(exact_channel(spec, 1.3))
        np.testing.assert_allclose(composed.mat, exact_channel(spec, 2.0).mat, atol=1e-10)

    @pytest.mark.parametrize("seed", range(5))
    def test_cptp(self, seed):
        defect, min_eig = check_cptp(exact_channel(random_spec(3, seed), 1.5))
        assert defect <= 1e-9
        assert min_eig >= -1e-9

    def test_negative_time(self, amplitude_damping):
        with pytest.raises(LindbladException) as exc_info:
            exact_channel(LindbladianSpec.single(amplitude_damping), -0.1)
        assert exc_info.value.code == "LIND010"

    def test_time_cap(self, amplitude_damping):
        with pytest.raises(LindbladException) as exc_info:
            exact_channel(LindbladianSpec.single(amplitude_damping), 1e4)
        assert exc_info.value.code == "LIND011"


class TestApplyChannel:
    """Tests for apply_channel and its reference-register variant."""

    def test_identity_channel(self):
        rho = random_density_matrix(2, 0)
        np.testing.assert_allclose(apply_channel(QuantumChannel.identity(2), rho).mat, rho.mat, atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchException) as exc_info:
            apply_channel(QuantumChannel.identity(2), DensityMatrix.maximally_mixed(3))
        assert exc_info.value.code == "LIND012"

    def test_reference_on_product_state(self):
        spec = random_spec(2, 4)
        ch = exact_channel(spec, 0.8)
        r, s = random_density_matrix(2, 1), random_density_matrix(2, 2)
        out = apply_channel_with_reference(ch, DensityMatrix(kron(r.mat, s.mat)))
        expected = kron(r.mat, apply_channel(ch, s).mat)
        np.testing.assert_allclose(out.mat, expected, atol=1e-12)

    def test_reference_on_entangled_state_gives_choi(self):
        ch = exact_channel(random_spec(2, 6), 0.5)
        gamma = maximally_entangled_vector(2, normalized=True)
        out = apply_channel_with_reference(ch, DensityMatrix(np.outer(gamma, gamma.conj())))
        np.testing.assert_allclose(out.mat, choi_matrix(ch), atol=1e-12)

    def test_reference_dimension(self):
        with pytest.raises(DimensionMismatchException) as exc_info:
            apply_channel_with_reference(QuantumChannel.identity(2), DensityMatrix.maximally_mixed(2))
        assert exc_info.value.code == "LIND013"


class TestChoi:
    """Tests for choi_matrix."""

    def test_identity_channel(self):
        gamma = maximally_entangled_vector(2)
        np.testing.assert_allclose(choi_matrix(QuantumChannel.identity(2)), np.outer(gamma, gamma) / 2)

    def test_completely_depolarizing(self):
        np.testing.assert_allclose(choi_matrix(QuantumChannel.completely_depolarizing(3)), np.eye(9) / 9, atol=1e-15)

    def test_inversion_on_matrix_units(self, amplitude_damping):
        ch = exact_channel(LindbladianSpec.single(amplitude_damping), 1.0)
        choi = choi_matrix(ch)
        for a in range(2):
            for b in range(2):
                unit = np.zeros((2, 2), dtype=complex)
                unit[a, b] = 1.0
                np.testing.assert_allclose(choi_action(choi, unit), unvec(ch.mat @ vec(unit), 2), atol=1e-12)

    def test_unit_trace_and_psd(self):
        choi = choi_matrix(exact_channel(random_spec(3, 1), 2.0))
        assert np.trace(choi).real == pytest.approx(1.0, abs=1e-9)
        assert np.linalg.eigvalsh(0.5 * (choi + choi.conj().T)).min() >= -1e-9


class TestQuantumChannel:
    """Tests for channel validation and algebra."""

    def test_rejects_non_trace_preserving(self):
        with pytest.raises(LindbladException) as exc_info:
            QuantumChannel(Superoperator(2, 2.0 * np.eye(4)))
        assert exc_info.value.code == "LIND005"

    def test_rejects_non_positive(self):
        # Transpose map: trace preserving but not completely positive
        transpose = np.zeros((4, 4), dtype=complex)
        for a in range(2):
            for b in range(2):
                unit = np.zeros((2, 2))
                unit[a, b] = 1.0
                transpose[:, b * 2 + a] = vec(unit.T)
        with pytest.raises(LindbladException) as exc_info:
            QuantumChannel(Superoperator(2, transpose))
        assert exc_info.value.code == "LIND006"

    def test_superoperator_shape(self):
        with pytest.raises(DimensionMismatchException) as exc_info:
            Superoperator(2, np.eye(3))
        assert exc_info.value.code == "LIND004"

    def test_power(self):
        spec = random_spec(2, 3)
        np.testing.assert_allclose(exact_channel(spec, 0.25).power(4).mat, exact_channel(spec, 1.0).mat, atol=1e-10)
        np.testing.assert_array_equal(exact_channel(spec, 0.25).power(0).mat, np.eye(4))

    def test_negative_power(self):
        with pytest.raises(LindbladException) as exc_info:
            QuantumChannel.identity(2).power(-1)
        assert exc_info.value.code == "LIND008"

    def test_compose_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchException) as exc_info:
            QuantumChannel.identity(2).compose(QuantumChannel.identity(3))
        assert exc_info.value.code == "LIND007"

    def test_compose_order(self, amplitude_damping):
        damp = exact_channel(LindbladianSpec.single(amplitude_damping), 1.0)
        flip = QuantumChannel(Superoperator(2, kron(np.array([[0, 1], [1, 0]]), np.array([[0, 1], [1, 0]]))))
        rho = DensityMatrix(np.outer(random_pure_state(2, 0).amplitudes, random_pure_state(2, 0).amplitudes.conj()))
        # flip o damp: damp first
        out = apply_channel(flip.compose(damp), rho).mat
        expected = apply_channel(flip, apply_channel(damp, rho)).mat
        np.testing.assert_allclose(out, expected, atol=1e-12)
