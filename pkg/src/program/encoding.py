"""Encoding of Lindblad operators and Hamiltonians into program states.

A Lindblad operator L becomes the vector ``(L (x) I) sum_j |j>|j>``, whose amplitude at
``i * d + j`` is ``L[i, j]``. Its Euclidean norm equals the Schatten-2 norm of L, so only
operators with ``||L||_2 = 1`` are states; other operators go through :func:`rescale_task`.
"""

import numpy as np

from src.numerics import DensityMatrix, StateVector, require_square, schatten_norm
from src.shared.config import get_config
from src.shared.exceptions import NormalizationException, ProgramEncodingException

from .types import HamiltonianEncoding, ProgramState, ProgramTriple, RescaledTask, local_dim_from_amplitudes


def program_amplitudes(l: np.ndarray) -> np.ndarray:
    """Row-major amplitudes of ``(L (x) I)|Gamma>`` without any norm check."""
    l = np.asarray(l, dtype=complex)
    require_square(l, "Lindblad operator")
    return l.reshape(-1).copy()


def encode_lindblad(l: np.ndarray) -> ProgramState:
    """Encode a unit Schatten-2 norm operator as a program state.

    Args:
        l: Square Lindblad operator with ``||l||_2 = 1`` within ``norm_tol``

    Returns:
        The program state with ``amplitudes[i * d + j] = l[i, j]``

    Raises:
        NormalizationException: If the norm is not one
    """
    amplitudes = program_amplitudes(l)
    d = int(np.asarray(l).shape[0])
    tol = get_config().numerics.norm_tol
    norm = float(np.linalg.norm(amplitudes))
    if abs(norm - 1.0) > tol:
        raise NormalizationException(
            f"Lindblad operator has Schatten-2 norm {norm!r}, but a program state needs norm 1; "
            "use rescale_task to normalize it and stretch the evolution time",
            code="PROG001",
            context={"norm": norm, "tol": tol},
        )
    return ProgramState(d, StateVector(amplitudes, norm_tol=tol))


def decode_program_state(p: ProgramState) -> np.ndarray:
    """Recover L from its program state by reshaping the amplitudes.

    Raises:
        ProgramEncodingException: If the amplitude count is not a perfect square
    """
    d = local_dim_from_amplitudes(p.amplitudes.size)
    return np.array(p.amplitudes.reshape(d, d))


def rescale_task(l_prime: np.ndarray, t: float) -> RescaledTask:
    """Normalize an operator and stretch the time to ``||l_prime||_2^2 * t``.

    Raises:
        ProgramEncodingException: If the operator is zero or t is negative
    """
    l_prime = np.asarray(l_prime, dtype=complex)
    require_square(l_prime, "Lindblad operator")
    if t < 0:
        raise ProgramEncodingException(
            f"Evolution time must be non-negative, got {t}",
            code="PROG004",
            context={"t": t},
        )
    norm = schatten_norm(l_prime, 2)
    if norm <= get_config().numerics.norm_tol:
        raise ProgramEncodingException(
            "Zero Lindblad operator cannot be encoded as a state; "
            "use L = I/sqrt(d) for the identity channel",
            code="PROG003",
            context={"norm": norm},
        )
    norm_sq = norm * norm
    return RescaledTask(
        normalized_op=l_prime / norm,
        original_norm_sq=norm_sq,
        rescaled_time=norm_sq * t,
        time=t,
    )


def encode_hamiltonian(h: np.ndarray) -> HamiltonianEncoding:
    """Encode a Hermitian matrix as ``sigma = (h + c I) / s``.

    ``c = max(0, -lambda_min(h))`` and ``s = Tr[h + c I]``. Evolving under ``sigma`` for
    time ``s * t`` reproduces ``h`` for time ``t`` since ``c I`` commutes with everything.

    Returns:
        HamiltonianEncoding with sigma, time_scale ``s`` and shift ``c``

    Raises:
        ProgramEncodingException: If h is not Hermitian or ``s`` vanishes
    """
    h = np.asarray(h, dtype=complex)
    d = require_square(h, "Hamiltonian")
    cfg = get_config().numerics
    defect = float(np.linalg.norm(h - h.conj().T))
    if defect > cfg.hermitian_tol:
        raise ProgramEncodingException(
            f"Hamiltonian is not Hermitian (defect {defect:.3e})",
            code="PROG005",
            context={"defect": defect},
        )

    hermitian = 0.5 * (h + h.conj().T)
    shift = max(0.0, -float(np.linalg.eigvalsh(hermitian).min()))
    shifted = hermitian + shift * np.eye(d)
    scale = float(np.trace(shifted).real)
    if scale <= cfg.trace_tol:
        raise ProgramEncodingException(
            "Hamiltonian is a non-positive multiple of the identity and has no state encoding",
            code="PROG006",
            context={"time_scale": scale, "shift": shift},
        )
    sigma = shifted / scale
    return HamiltonianEncoding(DensityMatrix(0.5 * (sigma + sigma.conj().T)), scale, shift)


def build_program_triple(sigma: DensityMatrix, psi: ProgramState) -> ProgramTriple:
    """Build ``omega = sigma (x) |psi><psi|``.

    Raises:
        DimensionMismatchException: If sigma and psi have different local dimensions
    """
    return ProgramTriple(sigma.dim, sigma, psi)
