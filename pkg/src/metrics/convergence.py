"""Channel distances, error-curve fits and convergence sweeps.

The exact diamond norm is not computed. Channels are compared through two lower bounds
instead: the trace distance between Choi states, and the best trace distance over sampled
pure inputs on system and reference. Passing a threshold on either is a necessary
condition only.
"""

from dataclasses import dataclass
from multiprocessing import Pool, cpu_count
from typing import Optional

import numpy as np
from scipy.stats import linregress

from src.lindblad import (
    LindbladianSpec,
    QuantumChannel,
    apply_channel,
    apply_channel_with_reference,
    choi_matrix,
    exact_channel,
)
from src.numerics import (
    DensityMatrix,
    maximally_entangled_vector,
    random_density_matrix,
    random_hermitian,
    random_pure_state,
    random_unit_hs_operator,
    trace_distance,
)
from src.program import encode_lindblad
from src.shared.config import get_config
from src.shared.exceptions import DimensionMismatchException, VerificationException
from src.shared.logs.logger import logger
from src.wml import build_dilated_generator, wml_simulate, wml_simulate_with_h, wml_step
from src.wml.types import DilationConfig

from .types import ConvergencePoint, ErrorCurve, ScalingReport, SweepResult, SweepRow


def _check_same_dim(a: QuantumChannel, b: QuantumChannel) -> None:
    if a.dim != b.dim:
        raise DimensionMismatchException(
            f"Cannot compare channels on dimensions {a.dim} and {b.dim}",
            code="MET006",
            context={"dim_a": a.dim, "dim_b": b.dim},
        )


def choi_trace_distance(a: QuantumChannel, b: QuantumChannel) -> float:
    """Trace distance between the normalized Choi states of two channels."""
    _check_same_dim(a, b)
    return trace_distance(choi_matrix(a), choi_matrix(b))


def sampled_diamond_lower_bound(a: QuantumChannel, b: QuantumChannel, trials: int, seed: int) -> float:
    """Largest output trace distance over sampled pure inputs on reference and system.

    The maximally entangled input is always the first sample, so the bound is never below
    :func:`choi_trace_distance`. Sample ``i`` of the rest uses seed ``seed + i``.
    """
    _check_same_dim(a, b)
    d = a.dim
    inputs = [maximally_entangled_vector(d, normalized=True)]
    inputs += [random_pure_state(d * d, seed + i).amplitudes for i in range(trials)]

    best = 0.0
    for vector in inputs:
        state = DensityMatrix(np.outer(vector, vector.conj()))
        out_a = apply_channel_with_reference(a, state)
        out_b = apply_channel_with_reference(b, state)
        best = max(best, trace_distance(out_a, out_b))
    return best


def fit_convergence(points, against: str = "n") -> ErrorCurve:
    """Least-squares fit of ``log(mean distance)`` against ``log(n)`` (or ``log(delta)``).

    Args:
        points: ConvergencePoint values, in any order
        against: "n" or "delta"

    Returns:
        ErrorCurve with points sorted ascending by the fit variable

    Raises:
        VerificationException: If there are fewer than 3 points or any distance is zero
    """
    if against not in ("n", "delta"):
        raise VerificationException(
            f"Fit variable must be 'n' or 'delta', got {against!r}",
            code="MET002",
            context={"against": against},
        )
    key = (lambda p: p.n) if against == "n" else (lambda p: p.delta)
    points = tuple(sorted(points, key=key))
    if len(points) < 3:
        raise VerificationException(
            f"A convergence fit needs at least 3 points, got {len(points)}",
            code="MET002",
            context={"points": len(points)},
        )
    if any(distance <= 0.0 for p in points for distance in p.distances):
        raise VerificationException(
            "A convergence fit needs strictly positive distances",
            code="MET003",
            context={"distances": [[float(x) for x in p.distances] for p in points]},
        )
    means = np.array([p.mean for p in points])

    x = np.log(np.array([float(key(p)) for p in points]))
    fit = linregress(x, np.log(means))
    return ErrorCurve(points, float(fit.slope), float(fit.intercept), float(fit.rvalue**2), against)


def single_step_order(d: int, trials: int, seed: int, deltas) -> ErrorCurve:
    """Fit the one-step defect ``trace_distance(wml_step, exp(L delta))`` against delta.

    Trial i draws its Lindblad operator and state from seed ``seed + i``.
    """
    config = DilationConfig(d)
    points = []
    for delta in deltas:
        gen = build_dilated_generator(config, 1, delta)
        distances = []
        for i in range(trials):
            l = random_unit_hs_operator(d, seed + i)
            rho = random_density_matrix(d, seed + i)
            out = wml_step(gen, rho, encode_lindblad(l))
            exact = apply_channel(exact_channel(LindbladianSpec.single(l), delta), rho)
            distances.append(trace_distance(out, exact))
        points.append(ConvergencePoint(1, float(delta), tuple(distances)))
    return fit_convergence(points, against="delta")


@dataclass(frozen=True)
class SweepTask:
    """One (n, trial) simulation of a convergence sweep."""

    n: int
    trial: int
    t: float
    l: np.ndarray
    rho: np.ndarray
    h: Optional[np.ndarray] = None
    with_reference: bool = False


def _exact_final(task: SweepTask, rho: DensityMatrix) -> DensityMatrix:
    spec = LindbladianSpec.single(task.l, hamiltonian=task.h)
    channel = exact_channel(spec, task.t)
    if task.with_reference:
        return apply_channel_with_reference(channel, rho)
    return apply_channel(channel, rho)


def run_sweep_task(task: SweepTask) -> SweepRow:
    """Simulate one sweep task and measure its trace distance to the exact evolution."""
    rho = DensityMatrix(task.rho)
    d = task.l.shape[0]
    config = DilationConfig(d, with_reference=task.with_reference)
    if task.h is None:
        result = wml_simulate(task.l, rho, task.t, task.n, config)
    else:
        result = wml_simulate_with_h(task.h, task.l, rho, task.t, task.n, config)
    distance = trace_distance(result.final_state, _exact_final(task, rho))
    return SweepRow(task.n, result.delta, task.trial, distance, task.t)


def worker_count(tasks: int) -> int:
    """Worker processes for a batch: ``WML_THREADS`` (default all cores), at most one per task."""
    threads = get_config().simulation.threads or cpu_count()
    return max(1, min(threads, tasks))


def run_tasks(tasks: list[SweepTask]) -> list[SweepRow]:
    """Run sweep tasks in parallel worker processes and return rows sorted by (n, t, trial)."""
    workers = worker_count(len(tasks))
    # Longest runs first keeps the pool busy
    ordered = sorted(tasks, key=lambda task: -task.n)
    if workers == 1:
        rows = [run_sweep_task(task) for task in ordered]
    else:
        logger.debug(f"Running {len(tasks)} sweep tasks on {workers} workers")
        with Pool(workers) as pool:
            rows = pool.map(run_sweep_task, ordered, chunksize=1)
    return sorted(rows, key=lambda row: (row.n, row.t, row.trial))


def sweep_inputs(
    d: int,
    trial_seed: int,
    l: Optional[np.ndarray],
    algorithm: int,
    h: Optional[np.ndarray],
    with_reference: bool,
) -> tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]:
    """Draw (L, rho, h) for one trial; fixed L and h are used as given."""
    l = random_unit_hs_operator(d, trial_seed) if l is None else np.asarray(l, dtype=complex)
    if algorithm == 2 and h is None:
        h = random_hermitian(d, trial_seed)
    if with_reference:
        vector = random_pure_state(d * d, trial_seed).amplitudes
        rho = np.outer(vector, vector.conj())
    else:
        rho = random_density_matrix(d, trial_seed).mat
    return l, rho, (None if algorithm == 1 else h)


def run_convergence_sweep(
    d: int,
    t: float,
    steps_list,
    trials: int,
    seed: int,
    l: Optional[np.ndarray] = None,
    algorithm: int = 1,
    h: Optional[np.ndarray] = None,
    with_reference: bool = False,
) -> SweepResult:
    """Trace distance to the exact evolution for every (n, trial), plus the log-log fit.

    Trial i draws its inputs from seed ``seed + i``; a given ``l`` or ``h`` is used for
    every trial. Results do not depend on the number of workers.
    """
    logger.start(f"Convergence sweep: d={d} t={t} n={list(steps_list)} trials={trials} algorithm={algorithm}")
    tasks = []
    for i in range(trials):
        l_i, rho_i, h_i = sweep_inputs(d, seed + i, l, algorithm, h, with_reference)
        tasks += [SweepTask(int(n), i, float(t), l_i, rho_i, h_i, with_reference) for n in steps_list]
    rows = run_tasks(tasks)

    points = []
    for n in sorted(set(int(n) for n in steps_list)):
        selected = [row for row in rows if row.n == n]
        points.append(ConvergencePoint(n, selected[0].delta, tuple(row.distance for row in selected)))
    curve = fit_convergence(points)
    logger.end(f"Sweep slope {curve.fitted_slope:.4f} (r^2 {curve.r_squared:.6f})")
    return SweepResult(tuple(rows), curve)


def t_squared_scaling_check(
    l: np.ndarray,
    ratio: float,
    times,
    trials: int = 3,
    seed: int = 0,
    factor: Optional[float] = None,
) -> ScalingReport:
    """Hold ``t^2 / n`` fixed across times and report how flat the error stays.

    ``n = round(t^2 / ratio)``; ``t = 0`` runs one step and has error 0.

    Raises:
        VerificationException: If some t > 0 gives n < 1
    """
    factor = get_config().sweep.flatness_factor if factor is None else factor
    l = np.asarray(l, dtype=complex)
    d = l.shape[0]
    steps = []
    for t in times:
        n = 1 if t == 0 else int(round(t * t / ratio))
        if n < 1:
            raise VerificationException(
                f"t={t} with t^2/n={ratio} gives n={n}; increase t or decrease the ratio",
                code="MET004",
                context={"t": t, "ratio": ratio, "n": n},
            )
        steps.append(n)

    tasks = []
    for i in range(trials):
        rho = random_density_matrix(d, seed + i).mat
        tasks += [SweepTask(n, i, float(t), l, rho) for t, n in zip(times, steps) if t != 0]
    rows = run_tasks(tasks)

    errors = []
    for t, n in zip(times, steps):
        if t == 0:
            errors.append(0.0)
            continue
        selected = [row.distance for row in rows if row.n == n and row.t == float(t)]
        errors.append(float(np.mean(selected)))
    report = ScalingReport(
        float(ratio), tuple(float(t) for t in times), tuple(steps), tuple(errors), float(factor), tuple(rows)
    )
    logger.info(f"Fixed t^2/n={ratio}: errors {[f'{e:.3e}' for e in errors]}, max/min {report.spread:.3f}")
    return report
