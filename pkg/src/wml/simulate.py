"""WML step and the n-step simulation loops.

Each step tensors a fresh program copy onto the current state, evolves the dilated space
for ``delta = t / n`` with the precomputed step channel, traces the program registers out
and projects the result back to a density matrix. The projection correction of every step
is logged; a correction above ``max_drift`` means the step is broken, not rounded.
"""

from typing import Optional, Union

import numpy as np

from src.lindblad import QuantumChannel, Superoperator
from src.numerics import (
    DensityMatrix,
    RegisterLayout,
    kron,
    matexp,
    partial_trace,
    project_to_density,
    swap_matrix,
    unvec,
    vec,
)
from src.program import (
    HamiltonianEncoding,
    ProgramState,
    ProgramTriple,
    build_program_triple,
    encode_hamiltonian,
    encode_lindblad,
)
from src.shared.config import get_config
from src.shared.exceptions import DimensionMismatchException, NumericalDriftException, SimulationException
from src.shared.logs.logger import logger

from .dilation import build_dilated_generator
from .types import DilatedGenerator, DilationConfig, SimulationResult

Program = Union[ProgramState, ProgramTriple]


def _program_density(gen: DilatedGenerator, program: Program) -> np.ndarray:
    expected = ProgramTriple if gen.algorithm == 2 else ProgramState
    if not isinstance(program, expected):
        raise DimensionMismatchException(
            f"Algorithm {gen.algorithm} consumes a {expected.__name__}, got {type(program).__name__}",
            code="WML006",
            context={"algorithm": gen.algorithm, "program": type(program).__name__},
        )
    if program.d != gen.config.d:
        raise DimensionMismatchException(
            f"Program local dimension {program.d} does not match generator dimension {gen.config.d}",
            code="WML006",
            context={"program_d": program.d, "d": gen.config.d},
        )
    return program.density()


def _check_state(gen: DilatedGenerator, rho: DensityMatrix) -> None:
    if rho.dim != gen.system_dim:
        raise DimensionMismatchException(
            f"State dimension {rho.dim} does not match the system registers {gen.system_labels} "
            f"(dimension {gen.system_dim})",
            code="WML006",
            context={"state_dim": rho.dim, "system_dim": gen.system_dim},
        )


def wml_step_with_drift(gen: DilatedGenerator, rho: DensityMatrix, program: Program) -> tuple[DensityMatrix, float]:
    """One WML step, returning the projected state and its projection correction.

    Raises:
        DimensionMismatchException: If the state or program does not fit the layout
        NumericalDriftException: If the correction exceeds ``max_drift``
    """
    _check_state(gen, rho)
    joint = kron(rho.mat, _program_density(gen, program))
    dim = gen.layout.total_dim
    evolved = unvec(gen.step_channel.mat @ vec(joint), dim)
    reduced = partial_trace(evolved, gen.layout, gen.program_labels)

    state, correction = project_to_density(reduced)
    max_drift = get_config().simulation.max_drift
    if correction > max_drift:
        raise NumericalDriftException(
            f"WML step drifted by {correction:.3e}, above the limit {max_drift:.1e}",
            code="WML007",
            context={"correction": correction, "max_drift": max_drift},
        )
    return state, correction


def wml_step(gen: DilatedGenerator, rho: DensityMatrix, program: Program) -> DensityMatrix:
    """``Tr_program[exp(M delta)(rho (x) program)]`` projected to a density matrix.

    Args:
        gen: Dilated generator holding the step channel
        rho: State on the system registers (R and S)
        program: ProgramState for algorithm 1, ProgramTriple for algorithm 2

    Returns:
        The state after one step
    """
    return wml_step_with_drift(gen, rho, program)[0]


def _check_run(t: float, n: int) -> None:
    if n < 1:
        raise SimulationException(
            f"Number of steps must be at least 1, got {n}",
            code="WML008",
            context={"n": n},
        )
    max_time = get_config().simulation.max_time
    if t < 0 or t > max_time:
        raise SimulationException(
            f"Evolution time must be in [0, {max_time}], got {t}",
            code="WML009",
            context={"t": t, "max_time": max_time},
        )


def _run_loop(
    gen: Optional[DilatedGenerator],
    rho: DensityMatrix,
    program: Program,
    t: float,
    n: int,
    label: str,
) -> SimulationResult:
    if gen is None:
        return SimulationResult(rho, n, 0.0, tuple(0.0 for _ in range(n)), t, label)

    logger.start(f"Algorithm {label}: d={gen.config.d} t={t} n={n} delta={gen.delta:.3e}")
    state = rho
    drift = []
    for k in range(n):
        state, correction = wml_step_with_drift(gen, state, program)
        drift.append(correction)
        logger.debug(f"step {k + 1}/{n} drift {correction:.3e}")
    result = SimulationResult(state, n, gen.delta, tuple(drift), t, label)
    logger.end(f"Algorithm {label} done: max drift {result.max_drift:.3e}, total drift {result.total_drift:.3e}")
    return result


def wml_simulate(
    l: np.ndarray,
    rho: DensityMatrix,
    t: float,
    n: int,
    config: Optional[DilationConfig] = None,
) -> SimulationResult:
    """Simulate ``exp(L t)`` for a single unit-norm Lindblad operator with n program copies.

    Args:
        l: Lindblad operator with ``||l||_2 = 1``
        rho: Initial state (on R and S when the config has a reference register)
        t: Evolution time
        n: Number of steps and program copies
        config: Dilation shape; defaults to the local dimension of ``l`` without reference

    Returns:
        SimulationResult with ``delta = t / n``

    Raises:
        SimulationException: If n < 1 or t is out of range
        NormalizationException: If ``||l||_2 != 1``; normalize with rescale_task
    """
    _check_run(t, n)
    program = encode_lindblad(l)
    config = config or DilationConfig(program.d)
    if t == 0:
        return _run_loop(None, rho, program, t, n, "1")
    gen = build_dilated_generator(config, 1, t / n)
    return _run_loop(gen, rho, program, t, n, "1")


def hamiltonian_encoding_for(h: np.ndarray) -> HamiltonianEncoding:
    """Encode h, mapping multiples of the identity to ``sigma = I / d`` with time scale d."""
    h = np.asarray(h, dtype=complex)
    d = h.shape[0]
    offset = np.trace(h).real / d
    if np.linalg.norm(h - offset * np.eye(d)) <= get_config().numerics.hermitian_tol:
        return HamiltonianEncoding(DensityMatrix.maximally_mixed(d), float(d), 1.0 - offset)
    return encode_hamiltonian(h)


def wml_simulate_with_h(
    h: np.ndarray,
    l: np.ndarray,
    rho: DensityMatrix,
    t: float,
    n: int,
    config: Optional[DilationConfig] = None,
) -> SimulationResult:
    """Simulate ``-i[h, .] + D_l`` with n copies of ``omega = sigma (x) |psi><psi|``.

    ``h`` is encoded as ``sigma = (h + c I) / s``. The swap Hamiltonian of the dilated
    generator carries the prefactor ``s``, so its first-order action is ``-i[h, .]``.

    Raises:
        SimulationException: If n < 1 or t is out of range
        NormalizationException: If ``||l||_2 != 1``
        ProgramEncodingException: If h is not Hermitian
    """
    _check_run(t, n)
    psi = encode_lindblad(l)
    encoding = hamiltonian_encoding_for(h)
    program = build_program_triple(encoding.sigma, psi)
    config = config or DilationConfig(psi.d)
    logger.debug(f"Hamiltonian encoding: {encoding.describe()}")
    if t == 0:
        return _run_loop(None, rho, program, t, n, "2")
    gen = build_dilated_generator(config, 2, t / n, hamiltonian_scale=encoding.time_scale)
    return _run_loop(gen, rho, program, t, n, "2")


def wml_simulate_with_reference(
    l: np.ndarray,
    rho_rs: DensityMatrix,
    t: float,
    n: int,
    phi=None,
) -> SimulationResult:
    """Simulate ``I_R (x) exp(L t)`` on a state of ``R (x) S`` with ``dim R = dim S``.

    Raises:
        DimensionMismatchException: If ``rho_rs`` is not on ``d^2`` dimensions
    """
    d = int(np.asarray(l).shape[0])
    if rho_rs.dim != d * d:
        raise DimensionMismatchException(
            f"Reference-system state must have dimension {d * d}, got {rho_rs.dim}",
            code="WML006",
            context={"state_dim": rho_rs.dim, "d": d},
        )
    return wml_simulate(l, rho_rs, t, n, DilationConfig(d, with_reference=True, phi=phi))


def effective_step_channel(gen: DilatedGenerator, program: Program) -> QuantumChannel:
    """One WML step as a channel on the system registers.

    Column ``vec(|a><b|)`` of the result is ``vec(Tr_program[exp(M delta)(|a><b| (x) program)])``.
    """
    ds = gen.system_dim
    dim = gen.layout.total_dim
    prog = _program_density(gen, program)
    mat = np.zeros((ds * ds, ds * ds), dtype=complex)
    for b in range(ds):
        for a in range(ds):
            unit = np.zeros((ds, ds), dtype=complex)
            unit[a, b] = 1.0
            evolved = unvec(gen.step_channel.mat @ vec(kron(unit, prog)), dim)
            mat[:, b * ds + a] = vec(partial_trace(evolved, gen.layout, gen.program_labels))
    return QuantumChannel(Superoperator(ds, mat))


def wml_channel(
    l: np.ndarray,
    t: float,
    n: int,
    config: Optional[DilationConfig] = None,
    h: Optional[np.ndarray] = None,
) -> QuantumChannel:
    """The channel of n WML steps: the n-th power of :func:`effective_step_channel`.

    Uses algorithm 1 when ``h`` is None and algorithm 2 otherwise.
    """
    _check_run(t, n)
    psi = encode_lindblad(l)
    config = config or DilationConfig(psi.d)
    if t == 0:
        return QuantumChannel.identity(config.system_dim)
    if h is None:
        gen = build_dilated_generator(config, 1, t / n)
        program: Program = psi
    else:
        encoding = hamiltonian_encoding_for(h)
        gen = build_dilated_generator(config, 2, t / n, hamiltonian_scale=encoding.time_scale)
        program = build_program_triple(encoding.sigma, psi)
    return effective_step_channel(gen, program).power(n)


def dme_simulate(sigma: DensityMatrix, rho: DensityMatrix, t: float, n: int) -> SimulationResult:
    """Density-matrix exponentiation: approximate ``exp(-i sigma t) rho exp(i sigma t)``.

    Each step applies ``exp(-i SWAP delta)`` to ``rho (x) sigma`` and traces the sigma copy
    out. It is the Hamiltonian-only special case of algorithm 2.

    Raises:
        DimensionMismatchException: If sigma and rho differ in dimension
        SimulationException: If n < 1 or t is out of range
    """
    _check_run(t, n)
    if sigma.dim != rho.dim:
        raise DimensionMismatchException(
            f"sigma (dim {sigma.dim}) and rho (dim {rho.dim}) must match",
            code="WML006",
            context={"sigma_dim": sigma.dim, "rho_dim": rho.dim},
        )
    d = rho.dim
    if t == 0:
        return SimulationResult(rho, n, 0.0, tuple(0.0 for _ in range(n)), t, "dme")

    delta = t / n
    layout = RegisterLayout((d, d))
    unitary = matexp(-1j * delta * swap_matrix(d))
    max_drift = get_config().simulation.max_drift
    state = rho
    drift = []
    logger.start(f"DME: d={d} t={t} n={n}")
    for _ in range(n):
        joint = unitary @ kron(state.mat, sigma.mat) @ unitary.conj().T
        state, correction = project_to_density(partial_trace(joint, layout, [1]))
        if correction > max_drift:
            raise NumericalDriftException(
                f"DME step drifted by {correction:.3e}, above the limit {max_drift:.1e}",
                code="WML007",
                context={"correction": correction, "max_drift": max_drift},
            )
        drift.append(correction)
    result = SimulationResult(state, n, delta, tuple(drift), t, "dme")
    logger.end(f"DME done: max drift {result.max_drift:.3e}")
    return result
