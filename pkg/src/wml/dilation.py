"""Construction of the dilation operator M and the dilated generator.

With ``Gamma = sum_i |i>|i>``, the dilation operator on registers (S, P, Q) is

    M = (I_S (x) |phi><Gamma|_{PQ}) (SWAP_{SP} (x) I_Q),    phi = Gamma / sqrt(d) by default,

extended by the identity on R and H. Tracing the program registers out of one short
evolution under M reproduces ``L rho L^dagger - {L^dagger L, rho} / 2`` at first order
when the program is ``(L (x) I)|Gamma>``.
"""

from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from src.lindblad import LindbladianSpec, exact_channel
from src.numerics import embed_operator, kron, maximally_entangled_vector, swap_matrix
from src.shared.config import get_config
from src.shared.exceptions import DimensionLimitException, SimulationException
from src.shared.logs.logger import logger

from .types import HAMILTONIAN, PROGRAM_P, PROGRAM_Q, SYSTEM, DilatedGenerator, DilationConfig

_INVARIANT_TOL = 1e-10


def _local_m(config: DilationConfig) -> np.ndarray:
    """M on registers (S, P, Q) alone."""
    d = config.d
    gamma = maximally_entangled_vector(d)
    phi = gamma / np.sqrt(d) if config.phi is None else config.phi.amplitudes
    return kron(np.eye(d), np.outer(phi, gamma.conj())) @ kron(swap_matrix(d), np.eye(d))


def build_m(config: DilationConfig, algorithm: int = 1) -> np.ndarray:
    """Dilation operator M on the full space ``[R,] S, [H,] P, Q``.

    Args:
        config: Dilation shape and optional phi
        algorithm: Selects whether the H register is present

    Returns:
        M, acting as the identity on R and H
    """
    layout = config.layout(algorithm)
    return embed_operator(_local_m(config), layout, [SYSTEM, PROGRAM_P, PROGRAM_Q])


def mdagm_closed_form(config: DilationConfig, algorithm: int = 1) -> np.ndarray:
    """``sum_{i,j} |i><j|_S (x) I_P (x) |i><j|_Q`` built by index summation."""
    d = config.d
    layout = config.layout(algorithm)
    s_idx = layout.index(SYSTEM)
    q_idx = layout.index(PROGRAM_Q)
    out = np.zeros((layout.total_dim, layout.total_dim), dtype=complex)
    # Diagonal on every register except S and Q, which must agree on both sides.
    for row in np.ndindex(*layout.dims):
        if row[s_idx] != row[q_idx]:
            continue
        r = int(np.ravel_multi_index(row, layout.dims))
        for j in range(d):
            col = list(row)
            col[s_idx] = j
            col[q_idx] = j
            out[r, int(np.ravel_multi_index(tuple(col), layout.dims))] += 1.0
    return out


def build_hamiltonian_swap(config: DilationConfig) -> np.ndarray:
    """``SWAP_{S,H}`` embedded in the algorithm-2 layout."""
    return embed_operator(swap_matrix(config.d), config.layout(2), [SYSTEM, HAMILTONIAN])


def check_dimension_limits(config: DilationConfig, algorithm: int) -> None:
    """Reject dilated spaces too large for a dense superoperator exponential.

    Raises:
        DimensionLimitException: If a configured cap is exceeded
    """
    sim = get_config().simulation
    cap = sim.max_dim_with_reference if config.with_reference else sim.max_dim
    if config.d > cap:
        raise DimensionLimitException(
            f"Local dimension {config.d} exceeds the cap {cap}"
            + (" with a reference register" if config.with_reference else ""),
            code="WML004",
            context={"d": config.d, "cap": cap, "with_reference": config.with_reference},
        )
    total = config.layout(algorithm).total_dim
    if total > sim.max_dilated_dim:
        raise DimensionLimitException(
            f"Dilated dimension {total} exceeds the cap {sim.max_dilated_dim}",
            code="WML004",
            context={"dilated_dim": total, "cap": sim.max_dilated_dim, "algorithm": algorithm},
        )


def build_dilated_generator(
    config: DilationConfig,
    algorithm: int,
    delta: float,
    hamiltonian_scale: float = 1.0,
) -> DilatedGenerator:
    """Build the dilated Lindbladian and its step channel ``exp(M delta)``.

    Algorithm 1 uses the single Lindblad operator M. Algorithm 2 adds the Hamiltonian
    ``hamiltonian_scale * SWAP_{S,H}``, where the scale is the time scale of the
    Hamiltonian encoding.

    Args:
        config: Dilation shape
        algorithm: 1 or 2
        delta: Step time, strictly positive
        hamiltonian_scale: Prefactor of the swap Hamiltonian (algorithm 2)

    Raises:
        SimulationException: If delta or algorithm is invalid, or an invariant fails
        DimensionLimitException: If the dilated space is too large
    """
    if algorithm not in (1, 2):
        raise SimulationException(
            f"Algorithm must be 1 or 2, got {algorithm}",
            code="WML003",
            context={"algorithm": algorithm},
        )
    if not delta > 0:
        raise SimulationException(
            f"Step time must be positive, got {delta}",
            code="WML002",
            context={"delta": delta},
        )
    check_dimension_limits(config, algorithm)
    return generator_cache()(config, algorithm, float(delta), float(hamiltonian_scale))


_generator_cache: Optional[Callable[..., DilatedGenerator]] = None


def generator_cache() -> Callable[..., DilatedGenerator]:
    """The per-process generator cache, an lru_cache of ``WML_GENERATOR_CACHE_SIZE`` entries.

    The cache is rebuilt empty when the configured size changes.
    """
    global _generator_cache
    size = get_config().simulation.generator_cache_size
    if _generator_cache is None or _generator_cache.cache_info().maxsize != size:
        _generator_cache = lru_cache(maxsize=size)(_build_generator)
    return _generator_cache


def _build_generator(config: DilationConfig, algorithm: int, delta: float, scale: float) -> DilatedGenerator:
    layout = config.layout(algorithm)
    logger.debug(f"Building dilated generator: d={config.d} algorithm={algorithm} dims={layout.dims} delta={delta}")

    m_op = build_m(config, algorithm)
    h_op = build_hamiltonian_swap(config) if algorithm == 2 else None
    _check_generator_invariants(config, algorithm, m_op, h_op)

    spec = LindbladianSpec(
        dim=layout.total_dim,
        hamiltonian=None if h_op is None else scale * h_op,
        lindblad_ops=(m_op,),
    )
    return DilatedGenerator(
        config=config,
        algorithm=algorithm,
        layout=layout,
        m_op=m_op,
        h_op=h_op,
        hamiltonian_scale=scale,
        delta=delta,
        step_channel=exact_channel(spec, delta),
    )


def _check_generator_invariants(config, algorithm, m_op, h_op) -> None:
    mdagm = m_op.conj().T @ m_op
    residual = float(np.max(np.abs(mdagm - mdagm_closed_form(config, algorithm))))
    if residual > _INVARIANT_TOL:
        raise SimulationException(
            f"M^dagger M deviates from its closed form by {residual:.3e}",
            code="WML005",
            context={"residual": residual},
        )
    if h_op is not None:
        eye = np.eye(h_op.shape[0])
        defect = max(
            float(np.max(np.abs(h_op - h_op.conj().T))),
            float(np.max(np.abs(h_op @ h_op - eye))),
        )
        if defect > _INVARIANT_TOL:
            raise SimulationException(
                f"Swap Hamiltonian is not a Hermitian involution (defect {defect:.3e})",
                code="WML005",
                context={"defect": defect},
            )
