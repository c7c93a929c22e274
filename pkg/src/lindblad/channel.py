"""Exact channels ``exp(L t)`` and their action on states."""

import numpy as np

from src.numerics import DensityMatrix, matexp, project_to_density, unvec, vec
from src.shared.config import get_config
from src.shared.exceptions import DimensionMismatchException, LindbladException
from src.shared.logs.logger import logger

from .generator import to_superoperator
from .types import LindbladianSpec, QuantumChannel, Superoperator, choi_from_superop, trace_defect

# Drift below this level is roundoff and only logged at DEBUG
DRIFT_WARN_LEVEL = 1e-12


def exact_channel(spec: LindbladianSpec, t: float) -> QuantumChannel:
    """Exact channel ``exp(L t)`` from the matrix exponential of the superoperator.

    Args:
        spec: Generator
        t: Evolution time, ``0 <= t <= max_time``

    Returns:
        The channel; ``t = 0`` gives the identity channel exactly

    Raises:
        LindbladException: If t is negative or above the configured cap
    """
    max_time = get_config().simulation.max_time
    if t < 0:
        raise LindbladException(
            f"Evolution time must be non-negative, got {t}",
            code="LIND010",
            context={"t": t},
        )
    if t > max_time:
        raise LindbladException(
            f"Evolution time {t} exceeds the cap {max_time}; split the evolution into shorter segments",
            code="LIND011",
            context={"t": t, "max_time": max_time},
        )
    if t == 0:
        return QuantumChannel.identity(spec.dim)

    generator = to_superoperator(spec)
    return QuantumChannel(Superoperator(spec.dim, matexp(t * generator.mat)))


def apply_channel(ch: QuantumChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply a channel to a state and project the result to a density matrix.

    Raises:
        DimensionMismatchException: If the dimensions differ
    """
    if rho.dim != ch.dim:
        raise DimensionMismatchException(
            f"State dimension {rho.dim} does not match channel dimension {ch.dim}",
            code="LIND012",
            context={"state_dim": rho.dim, "channel_dim": ch.dim},
        )
    out = unvec(ch.mat @ vec(rho.mat), ch.dim)
    state, correction = project_to_density(out)
    if correction > DRIFT_WARN_LEVEL:
        logger.warn(f"apply_channel projection correction {correction:.3e}")
    else:
        logger.debug(f"apply_channel projection correction {correction:.3e}")
    return state


def apply_channel_with_reference(ch: QuantumChannel, rho_rs: DensityMatrix) -> DensityMatrix:
    """Apply ``I_R (x) ch`` to a state on ``R (x) S`` with ``dim R = dim S``.

    Raises:
        DimensionMismatchException: If ``rho_rs`` is not on ``d * d`` dimensions
    """
    d = ch.dim
    if rho_rs.dim != d * d:
        raise DimensionMismatchException(
            f"Reference-system state must have dimension {d * d}, got {rho_rs.dim}",
            code="LIND013",
            context={"state_dim": rho_rs.dim, "channel_dim": d},
        )
    tensor = np.asarray(ch.mat).reshape(d, d, d, d)
    rho4 = np.asarray(rho_rs.mat).reshape(d, d, d, d)
    # out[r, a, t, b] = sum_{c, e} rho[r, c, t, e] ch(|c><e|)[a, b]
    out = np.einsum("baec,rcte->ratb", tensor, rho4).reshape(d * d, d * d)
    state, correction = project_to_density(out)
    logger.debug(f"apply_channel_with_reference projection correction {correction:.3e}")
    return state


def choi_matrix(ch: QuantumChannel) -> np.ndarray:
    """Normalized Choi state ``(I (x) ch)(|Gamma><Gamma| / d)``, registers ordered (R, S)."""
    return choi_from_superop(ch.superop)


def check_cptp(ch: QuantumChannel) -> tuple[float, float]:
    """Measure trace preservation and complete positivity.

    Returns:
        Tuple of (trace-preservation defect, smallest Choi eigenvalue)
    """
    choi = choi_matrix(ch)
    min_eig = float(np.linalg.eigvalsh(0.5 * (choi + choi.conj().T)).min())
    return trace_defect(ch.superop), min_eig
