"""Tests for channel distances, curve fits and convergence sweeps."""

import numpy as np
import pytest

from src.lindblad import LindbladianSpec, QuantumChannel, exact_channel
from src.metrics import (
    ConvergencePoint,
    ScalingReport,
    choi_trace_distance,
    fit_convergence,
    run_convergence_sweep,
    sampled_diamond_lower_bound,
    single_step_order,
    t_squared_scaling_check,
)
from src.shared.exceptions import DimensionMismatchException, VerificationException
from src.wml import wml_channel


class TestChannelDistances:
    """Tests for the diamond-distance proxies."""

    def test_identical_channels(self):
        ch = QuantumChannel.identity(2)
        assert choi_trace_distance(ch, ch) == 0.0
        assert sampled_diamond_lower_bound(ch, ch, trials=3, seed=0) == 0.0

    def test_identity_against_depolarizing(self):
        distance = choi_trace_distance(QuantumChannel.identity(2), QuantumChannel.completely_depolarizing(2))
        assert distance == pytest.approx(0.75, abs=1e-12)

    def test_distances_are_symmetric(self, amplitude_damping):
        exact = exact_channel(LindbladianSpec.single(amplitude_damping), 1.0)
        approx = wml_channel(amplitude_damping, 1.0, 10)
        assert choi_trace_distance(exact, approx) == choi_trace_distance(approx, exact)
        forward = sampled_diamond_lower_bound(exact, approx, trials=5, seed=11)
        assert forward == sampled_diamond_lower_bound(approx, exact, trials=5, seed=11)

    def test_identity_against_z_unitary(self, pauli_z):
        z_unitary = exact_channel(LindbladianSpec.unitary(0.5 * np.pi * pauli_z), 1.0)
        identity = QuantumChannel.identity(2)
        assert choi_trace_distance(identity, z_unitary) == pytest.approx(1.0, abs=1e-12)
        assert sampled_diamond_lower_bound(identity, z_unitary, trials=5, seed=0) == pytest.approx(1.0, abs=1e-12)

    def test_sampled_bound_dominates_choi(self, amplitude_damping):
        exact = exact_channel(LindbladianSpec.single(amplitude_damping), 1.0)
        approx = wml_channel(amplitude_damping, 1.0, 10)
        assert sampled_diamond_lower_bound(exact, approx, trials=10, seed=3) >= choi_trace_distance(exact, approx)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchException) as exc_info:
            choi_trace_distance(QuantumChannel.identity(2), QuantumChannel.identity(3))
        assert exc_info.value.code == "MET006"


class TestConvergencePoint:
    """Tests for ConvergencePoint."""

    def test_mean(self):
        assert ConvergencePoint(10, 0.1, (0.1, 0.3)).mean == pytest.approx(0.2)

    def test_distance_out_of_range(self):
        with pytest.raises(VerificationException) as exc_info:
            ConvergencePoint(10, 0.1, (0.5, 1.5))
        assert exc_info.value.code == "MET005"


class TestFitConvergence:
    """Tests for fit_convergence."""

    def test_exact_power_law(self):
        points = [ConvergencePoint(n, 1.0 / n, (0.5 / n, 0.5 / n)) for n in (1000, 10, 100)]
        curve = fit_convergence(points)
        assert [p.n for p in curve.points] == [10, 100, 1000]
        assert curve.fitted_slope == pytest.approx(-1.0)
        assert curve.fitted_intercept == pytest.approx(np.log(0.5))
        assert curve.r_squared == pytest.approx(1.0)
        assert curve.slope_within(-1.0, 0.15)

    def test_against_delta(self):
        points = [ConvergencePoint(1, delta, (delta**2,)) for delta in (0.1, 0.05, 0.025)]
        curve = fit_convergence(points, against="delta")
        assert curve.fitted_slope == pytest.approx(2.0)
        assert curve.points[0].delta == 0.025

    def test_too_few_points(self):
        with pytest.raises(VerificationException) as exc_info:
            fit_convergence([ConvergencePoint(10, 0.1, (0.1,)), ConvergencePoint(100, 0.01, (0.01,))])
        assert exc_info.value.code == "MET002"

    def test_unknown_fit_variable(self):
        with pytest.raises(VerificationException) as exc_info:
            fit_convergence([], against="time")
        assert exc_info.value.code == "MET002"

    def test_zero_mean(self):
        points = [ConvergencePoint(n, 1.0 / n, (0.0,)) for n in (10, 100, 1000)]
        with pytest.raises(VerificationException) as exc_info:
            fit_convergence(points)
        assert exc_info.value.code == "MET003"

    def test_single_zero_distance(self):
        points = [ConvergencePoint(n, 1.0 / n, (1.0 / n, 1.0 / n)) for n in (10, 100)]
        points.append(ConvergencePoint(1000, 1e-3, (0.0, 2e-3)))
        with pytest.raises(VerificationException) as exc_info:
            fit_convergence(points)
        assert exc_info.value.code == "MET003"

    def test_scaling_distances_shifts_intercept(self):
        rng = np.random.default_rng(5)
        base = [ConvergencePoint(n, 1.0 / n, tuple(rng.uniform(0.5, 1.0, 3) / n)) for n in (10, 100, 1000)]
        c = 0.3
        scaled = [ConvergencePoint(p.n, p.delta, tuple(c * x for x in p.distances)) for p in base]
        original, shifted = fit_convergence(base), fit_convergence(scaled)
        assert shifted.fitted_slope == pytest.approx(original.fitted_slope, abs=1e-12)
        assert shifted.fitted_intercept - original.fitted_intercept == pytest.approx(np.log(c), abs=1e-12)

    def test_noisy_inverse_n(self):
        rng = np.random.default_rng(17)
        points = [
            ConvergencePoint(n, 1.0 / n, tuple(0.5 / n * np.exp(0.01 * rng.standard_normal(5))))
            for n in (10, 100, 1000, 10000)
        ]
        curve = fit_convergence(points)
        assert curve.slope_within(-1.0, 0.02)
        assert curve.r_squared > 0.999

    def test_json(self):
        points = [ConvergencePoint(n, 1.0 / n, (1.0 / n,)) for n in (10, 100, 1000)]
        obj = fit_convergence(points).to_json()
        assert obj["against"] == "n"
        assert len(obj["points"]) == 3
        assert obj["slope"] == pytest.approx(-1.0)


class TestSingleStepOrder:
    """Tests for the one-step defect fit."""

    def test_quadratic_in_delta(self):
        deltas = [2.0**-k for k in range(3, 11)]
        curve = single_step_order(2, trials=2, seed=42, deltas=deltas)
        assert curve.against == "delta"
        assert curve.slope_within(2.0, 0.1)


class TestConvergenceSweep:
    """Tests for run_convergence_sweep."""

    def test_rows_sorted_and_complete(self):
        result = run_convergence_sweep(2, 1.0, [10, 20, 40], trials=2, seed=42)
        assert [(row.n, row.trial) for row in result.rows] == [(n, i) for n in (10, 20, 40) for i in (0, 1)]
        assert all(0.0 <= row.distance <= 1.0 for row in result.rows)
        assert result.rows[0].delta == pytest.approx(0.1)

    def test_reruns_are_identical(self):
        first = run_convergence_sweep(2, 1.0, [10, 20, 40], trials=2, seed=7)
        second = run_convergence_sweep(2, 1.0, [10, 20, 40], trials=2, seed=7)
        assert first.rows == second.rows
        assert first.curve.fitted_slope == second.curve.fitted_slope

    def test_fixed_lindblad_operator(self, amplitude_damping):
        result = run_convergence_sweep(2, 1.0, [10, 100, 1000], trials=1, seed=0, l=amplitude_damping)
        assert result.curve.slope_within(-1.0, 0.15)

    @pytest.mark.slow
    def test_random_operators_slope(self):
        result = run_convergence_sweep(2, 1.0, [10, 100, 1000, 10000], trials=3, seed=42)
        assert result.curve.slope_within(-1.0, 0.15)

    @pytest.mark.slow
    def test_algorithm_two_slope(self):
        result = run_convergence_sweep(2, 1.0, [10, 100, 1000], trials=2, seed=42, algorithm=2)
        assert result.curve.slope_within(-1.0, 0.15)

    @pytest.mark.slow
    def test_entangled_inputs_slope(self):
        result = run_convergence_sweep(2, 1.0, [10, 100, 1000], trials=2, seed=42, with_reference=True)
        assert result.curve.slope_within(-1.0, 0.15)

    @pytest.mark.slow
    def test_worker_count_does_not_change_rows(self, monkeypatch):
        serial = run_convergence_sweep(2, 1.0, [10, 20, 40], trials=2, seed=3)
        monkeypatch.setenv("WML_THREADS", "2")
        from src.shared.config import reset_config

        reset_config()
        parallel = run_convergence_sweep(2, 1.0, [10, 20, 40], trials=2, seed=3)
        assert serial.rows == parallel.rows


class TestTSquaredScaling:
    """Tests for the fixed t^2/n check."""

    def test_report_fields(self, amplitude_damping):
        report = t_squared_scaling_check(amplitude_damping, 1e-2, [0.0, 0.5, 1.0], trials=1)
        assert report.steps == (1, 25, 100)
        assert report.errors[0] == 0.0
        assert all(e > 0.0 for e in report.errors[1:])
        assert len(report.rows) == 2

    @pytest.mark.slow
    def test_error_stays_flat(self, amplitude_damping):
        report = t_squared_scaling_check(amplitude_damping, 1e-3, [0.5, 1.0, 2.0], trials=2)
        assert report.steps == (250, 1000, 4000)
        assert report.passed

    def test_times_sharing_a_step_count_stay_separate(self, amplitude_damping):
        report = t_squared_scaling_check(amplitude_damping, 0.1, [1.0, 1.01, 3.0], trials=1)
        assert report.steps == (10, 10, 90)
        assert len(report.rows) == 3
        alone = t_squared_scaling_check(amplitude_damping, 0.1, [1.0], trials=1)
        assert report.errors[0] == pytest.approx(alone.errors[0], abs=1e-14)
        assert report.errors[0] != report.errors[1]

    def test_ratio_too_large(self, amplitude_damping):
        with pytest.raises(VerificationException) as exc_info:
            t_squared_scaling_check(amplitude_damping, 10.0, [0.5], trials=1)
        assert exc_info.value.code == "MET004"

    def test_spread(self):
        report = ScalingReport(1e-3, (0.0, 1.0, 2.0), (1, 1000, 4000), (0.0, 1e-3, 3e-3), 4.0)
        assert report.spread == pytest.approx(3.0)
        assert report.passed
        assert report.to_json()["max_min_ratio"] == pytest.approx(3.0)
