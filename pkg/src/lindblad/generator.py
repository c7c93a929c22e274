"""Direct and vectorized application of a Lindbladian generator."""

import numpy as np

from src.numerics import DensityMatrix, anticommutator, commutator, dagger, kron
from src.shared.exceptions import DimensionMismatchException

from .types import LindbladianSpec, Superoperator


def _as_matrix(rho) -> np.ndarray:
    return rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def apply_lindbladian(spec: LindbladianSpec, rho) -> np.ndarray:
    """Evaluate ``L(rho) = -i[H, rho] + sum_k L_k rho L_k^dagger - {L_k^dagger L_k, rho} / 2``.

    Args:
        spec: Generator to apply
        rho: Density matrix (or any square matrix) of dimension ``spec.dim``

    Returns:
        The generator applied to ``rho``; Hermitian and traceless for Hermitian input

    Raises:
        DimensionMismatchException: If the dimensions differ
    """
    x = _as_matrix(rho)
    if x.shape != (spec.dim, spec.dim):
        raise DimensionMismatchException(
            f"State of shape {x.shape} does not match Lindbladian dimension {spec.dim}",
            code="LIND009",
            context={"shape": list(x.shape), "dim": spec.dim},
        )

    out = np.zeros_like(x, dtype=complex)
    if spec.hamiltonian is not None:
        out += -1j * commutator(spec.hamiltonian, x)
    for l in spec.lindblad_ops:
        ldl = dagger(l) @ l
        out += l @ x @ dagger(l) - 0.5 * anticommutator(ldl, x)
    return out


def to_superoperator(spec: LindbladianSpec) -> Superoperator:
    """Column-stacking matrix of the generator.

    Uses ``vec(A X B) = kron(B.T, A) vec(X)``, which gives
    ``sum_k conj(L_k) (x) L_k - (I (x) L_k^dagger L_k + (L_k^dagger L_k).T (x) I) / 2``
    for the dissipator and ``-i (I (x) H - H.T (x) I)`` for the Hamiltonian part.
    """
    d = spec.dim
    eye = np.eye(d, dtype=complex)
    mat = np.zeros((d * d, d * d), dtype=complex)
    if spec.hamiltonian is not None:
        h = spec.hamiltonian
        mat += -1j * (kron(eye, h) - kron(h.T, eye))
    for l in spec.lindblad_ops:
        ldl = dagger(l) @ l
        mat += kron(np.conj(l), l) - 0.5 * (kron(eye, ldl) + kron(ldl.T, eye))
    return Superoperator(d, mat)
