"""Tests for the WML step and the simulation loops."""

import numpy as np
import pytest

from src.lindblad import LindbladianSpec, apply_channel, apply_channel_with_reference, exact_channel
from src.numerics import (
    DensityMatrix,
    RegisterLayout,
    matexp,
    maximally_entangled_vector,
    partial_trace,
    random_density_matrix,
    trace_distance,
)
from src.program import build_program_triple, encode_hamiltonian, encode_lindblad
from src.shared.exceptions import (
    DimensionMismatchException,
    NormalizationException,
    ProgramEncodingException,
    SimulationException,
)
from src.wml import (
    DilationConfig,
    build_dilated_generator,
    dme_simulate,
    effective_step_channel,
    hamiltonian_encoding_for,
    wml_channel,
    wml_simulate,
    wml_simulate_with_h,
    wml_simulate_with_reference,
    wml_step,
    wml_step_with_drift,
)

ZERO_GENERATOR = np.eye(2, dtype=complex) / np.sqrt(2)
PLUS = DensityMatrix(np.full((2, 2), 0.5, dtype=complex))


def exact_final(l, rho, t, h=None):
    return apply_channel(exact_channel(LindbladianSpec.single(l, hamiltonian=h), t), rho)


class TestWmlStep:
    """Tests for a single WML step."""

    def test_zero_generator_leaves_state(self):
        rho = random_density_matrix(2, seed=4)
        gen = build_dilated_generator(DilationConfig(2), 1, 0.01)
        out = wml_step(gen, rho, encode_lindblad(ZERO_GENERATOR))
        assert trace_distance(out, rho) <= 1e-3

    def test_first_order_decay(self, amplitude_damping, excited_state):
        gen = build_dilated_generator(DilationConfig(2), 1, 0.01)
        out = wml_step(gen, DensityMatrix(excited_state), encode_lindblad(amplitude_damping))
        assert out.mat[0, 0].real == pytest.approx(0.01, abs=5e-4)

    def test_drift_is_tiny(self, amplitude_damping):
        gen = build_dilated_generator(DilationConfig(2), 1, 0.1)
        _, correction = wml_step_with_drift(gen, random_density_matrix(2, seed=1), encode_lindblad(amplitude_damping))
        assert 0.0 <= correction <= 1e-8

    def test_state_dimension_mismatch(self, amplitude_damping):
        gen = build_dilated_generator(DilationConfig(2), 1, 0.1)
        with pytest.raises(DimensionMismatchException) as exc_info:
            wml_step(gen, DensityMatrix.maximally_mixed(3), encode_lindblad(amplitude_damping))
        assert exc_info.value.code == "WML006"

    def test_program_kind_mismatch(self, amplitude_damping):
        gen = build_dilated_generator(DilationConfig(2), 1, 0.1)
        triple = build_program_triple(DensityMatrix.maximally_mixed(2), encode_lindblad(amplitude_damping))
        with pytest.raises(DimensionMismatchException) as exc_info:
            wml_step(gen, PLUS, triple)
        assert exc_info.value.context["program"] == "ProgramTriple"

    def test_program_dimension_mismatch(self):
        gen = build_dilated_generator(DilationConfig(2), 1, 0.1)
        with pytest.raises(DimensionMismatchException):
            wml_step(gen, PLUS, encode_lindblad(np.eye(3) / np.sqrt(3)))


class TestEffectiveStepChannel:
    """Tests for the one-step channel on the system."""

    def test_agrees_with_step(self, amplitude_damping):
        gen = build_dilated_generator(DilationConfig(2), 1, 0.2)
        program = encode_lindblad(amplitude_damping)
        rho = random_density_matrix(2, seed=11)
        channel = effective_step_channel(gen, program)
        np.testing.assert_allclose(apply_channel(channel, rho).mat, wml_step(gen, rho, program).mat, atol=1e-12)

    def test_n_step_channel_agrees_with_loop(self, amplitude_damping):
        rho = random_density_matrix(2, seed=12)
        looped = wml_simulate(amplitude_damping, rho, 1.0, 10).final_state
        np.testing.assert_allclose(apply_channel(wml_channel(amplitude_damping, 1.0, 10), rho).mat, looped.mat, atol=1e-10)

    def test_zero_time_is_identity(self, amplitude_damping):
        np.testing.assert_array_equal(wml_channel(amplitude_damping, 0.0, 1).mat, np.eye(4))


class TestWmlSimulate:
    """Tests for wml_simulate."""

    def test_zero_time_returns_input(self, amplitude_damping, excited_state):
        rho = DensityMatrix(excited_state)
        result = wml_simulate(amplitude_damping, rho, 0.0, 1)
        assert result.final_state is rho
        assert result.delta == 0.0

    def test_amplitude_damping(self, amplitude_damping, excited_state):
        result = wml_simulate(amplitude_damping, DensityMatrix(excited_state), 1.0, 1000)
        assert result.final_state.mat[1, 1].real == pytest.approx(np.exp(-1.0), abs=5e-3)
        assert result.steps == 1000
        assert result.delta * result.steps == pytest.approx(1.0, abs=1e-12)
        assert len(result.drift_log) == 1000
        assert result.max_drift <= 1e-8
        assert result.total_drift <= 1e-6

    @pytest.mark.slow
    def test_cumulative_drift_over_many_steps(self, amplitude_damping):
        result = wml_simulate(amplitude_damping, random_density_matrix(2, seed=2), 1.0, 10000)
        assert result.total_drift <= 1e-6

    def test_error_shrinks_with_more_steps(self, amplitude_damping):
        rho = random_density_matrix(2, seed=5)
        exact = exact_final(amplitude_damping, rho, 1.0)
        coarse = trace_distance(wml_simulate(amplitude_damping, rho, 1.0, 10).final_state, exact)
        fine = trace_distance(wml_simulate(amplitude_damping, rho, 1.0, 100).final_state, exact)
        assert fine < coarse / 5

    def test_zero_steps(self, amplitude_damping):
        with pytest.raises(SimulationException) as exc_info:
            wml_simulate(amplitude_damping, PLUS, 1.0, 0)
        assert exc_info.value.code == "WML008"

    @pytest.mark.parametrize("t", [-0.5, 1e4])
    def test_time_out_of_range(self, amplitude_damping, t):
        with pytest.raises(SimulationException) as exc_info:
            wml_simulate(amplitude_damping, PLUS, t, 10)
        assert exc_info.value.code == "WML009"

    def test_norm_violation_points_at_rescaling(self, amplitude_damping):
        with pytest.raises(NormalizationException) as exc_info:
            wml_simulate(2.0 * amplitude_damping, PLUS, 1.0, 10)
        assert "rescale_task" in str(exc_info.value)

    def test_result_json(self, amplitude_damping):
        obj = wml_simulate(amplitude_damping, PLUS, 0.5, 5).to_json()
        assert obj["algorithm"] == "1"
        assert obj["n"] == 5
        assert obj["delta"] == pytest.approx(0.1)
        assert obj["final_state"]["dim"] == 2
        assert set(obj) == {"algorithm", "time", "n", "delta", "max_drift", "total_drift", "final_state"}


class TestWmlSimulateWithH:
    """Tests for the algorithm-2 loop."""

    def test_unitary_evolution(self, pauli_z):
        t = np.pi / 4
        result = wml_simulate_with_h(pauli_z, ZERO_GENERATOR, PLUS, t, 1000)
        u = matexp(-1j * t * pauli_z)
        expected = u @ PLUS.mat @ u.conj().T
        assert trace_distance(result.final_state, expected) <= 5e-3
        assert result.algorithm == "2"

    def test_zero_hamiltonian(self, amplitude_damping):
        rho = random_density_matrix(2, seed=8)
        exact = exact_final(amplitude_damping, rho, 1.0)
        with_h = wml_simulate_with_h(np.zeros((2, 2)), amplitude_damping, rho, 1.0, 2000)
        without_h = wml_simulate(amplitude_damping, rho, 1.0, 1000)
        assert trace_distance(without_h.final_state, exact) <= 5e-3
        assert trace_distance(with_h.final_state, exact) <= 5e-3

    def test_hamiltonian_and_dissipator(self, pauli_z, amplitude_damping):
        rho = random_density_matrix(2, seed=9)
        exact = exact_final(amplitude_damping, rho, 0.5, h=0.5 * pauli_z)
        result = wml_simulate_with_h(0.5 * pauli_z, amplitude_damping, rho, 0.5, 500)
        assert trace_distance(result.final_state, exact) <= 5e-3

    def test_channel_form_matches_loop(self, pauli_z, amplitude_damping):
        rho = random_density_matrix(2, seed=10)
        looped = wml_simulate_with_h(pauli_z, amplitude_damping, rho, 0.3, 6).final_state
        channel = wml_channel(amplitude_damping, 0.3, 6, h=pauli_z)
        np.testing.assert_allclose(apply_channel(channel, rho).mat, looped.mat, atol=1e-10)

    def test_non_hermitian_hamiltonian(self, amplitude_damping):
        with pytest.raises(ProgramEncodingException) as exc_info:
            wml_simulate_with_h(amplitude_damping, amplitude_damping, PLUS, 1.0, 10)
        assert exc_info.value.code == "PROG005"


class TestHamiltonianEncodingFor:
    """Tests for hamiltonian_encoding_for."""

    def test_identity_multiple_maps_to_maximally_mixed(self):
        encoding = hamiltonian_encoding_for(np.zeros((2, 2)))
        np.testing.assert_allclose(encoding.sigma.mat, np.eye(2) / 2)
        assert encoding.time_scale == 2.0

    def test_general_hamiltonian_uses_encoder(self, pauli_z):
        encoding = hamiltonian_encoding_for(pauli_z)
        reference = encode_hamiltonian(pauli_z)
        np.testing.assert_allclose(encoding.sigma.mat, reference.sigma.mat)
        assert encoding.time_scale == reference.time_scale


class TestWmlSimulateWithReference:
    """Tests for simulation with a reference register."""

    def test_reference_marginal_untouched(self, amplitude_damping):
        rho_r = random_density_matrix(2, seed=20)
        rho_s = random_density_matrix(2, seed=21)
        rho_rs = DensityMatrix(np.kron(rho_r.mat, rho_s.mat))
        result = wml_simulate_with_reference(amplitude_damping, rho_rs, 1.0, 50)
        marginal = partial_trace(result.final_state.mat, RegisterLayout((2, 2)), [1])
        np.testing.assert_allclose(marginal, rho_r.mat, atol=1e-9)

    def test_entangled_input(self, amplitude_damping):
        phi = maximally_entangled_vector(2, normalized=True)
        rho_rs = DensityMatrix(np.outer(phi, phi.conj()))
        result = wml_simulate_with_reference(amplitude_damping, rho_rs, 1.0, 1000)
        expected = apply_channel_with_reference(exact_channel(LindbladianSpec.single(amplitude_damping), 1.0), rho_rs)
        assert trace_distance(result.final_state, expected) <= 5e-3

    def test_wrong_dimension(self, amplitude_damping):
        with pytest.raises(DimensionMismatchException) as exc_info:
            wml_simulate_with_reference(amplitude_damping, PLUS, 1.0, 10)
        assert exc_info.value.code == "WML006"


class TestDmeSimulate:
    """Tests for density-matrix exponentiation."""

    def test_approximates_unitary(self):
        sigma = DensityMatrix.basis(2, 0)
        result = dme_simulate(sigma, PLUS, 1.0, 1000)
        u = matexp(-1j * sigma.mat)
        assert trace_distance(result.final_state, u @ PLUS.mat @ u.conj().T) <= 5e-3
        assert result.algorithm == "dme"

    def test_zero_time(self):
        result = dme_simulate(DensityMatrix.basis(2, 0), PLUS, 0.0, 3)
        assert result.final_state is PLUS

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchException):
            dme_simulate(DensityMatrix.maximally_mixed(3), PLUS, 1.0, 10)
