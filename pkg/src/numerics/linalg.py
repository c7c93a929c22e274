"""Dense complex-matrix kernel.

Conventions used repo-wide:

- Composite indices are row-major: basis vector ``|i_1 ... i_k>`` sits at
  ``((i_1 * d_2 + i_2) * d_3 + ...)``, which is what ``numpy.kron`` produces.
- Registers are numbered in the order of their :class:`RegisterLayout`.
"""

from collections.abc import Iterable
from typing import Union

import numpy as np
from scipy.linalg import expm

from src.shared.config import get_config
from src.shared.exceptions import (
    DimensionMismatchException,
    NumericalDriftException,
    NumericsException,
)

from .types import DensityMatrix, RegisterLayout, require_square


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with row-major index convention ``i_a * dim_b + i_b``."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(
    x: np.ndarray,
    layout: RegisterLayout,
    traced: Iterable[Union[int, str]],
) -> np.ndarray:
    """Trace out a set of registers.

    Args:
        x: Square matrix on the full space of ``layout``
        layout: Register dimensions of ``x``
        traced: Register indices or labels to trace out

    Returns:
        Matrix on the kept registers, in their original order

    Raises:
        DimensionMismatchException: If ``x`` does not match the layout
    """
    x = np.asarray(x, dtype=complex)
    dim = require_square(x, "partial_trace input")
    if dim != layout.total_dim:
        raise DimensionMismatchException(
            f"Matrix dimension {dim} does not match layout {layout.dims}",
            code="NUM010",
            context={"dim": dim, "layout": list(layout.dims)},
        )

    traced_idx = set(layout.indices(traced))
    n = layout.num_registers
    keep = [i for i in range(n) if i not in traced_idx]

    # Row axes are labelled 0..n-1, column axes n..2n-1; a traced register shares its label.
    in_labels = list(range(n)) + [i if i in traced_idx else n + i for i in range(n)]
    out_labels = keep + [n + i for i in keep]
    tensor = x.reshape(layout.dims + layout.dims)
    reduced = np.einsum(tensor, in_labels, out_labels)

    kept_dim = int(np.prod([layout.dims[i] for i in keep])) if keep else 1
    return reduced.reshape(kept_dim, kept_dim)


def embed_operator(
    op: np.ndarray,
    layout: RegisterLayout,
    targets: Iterable[Union[int, str]],
) -> np.ndarray:
    """Place an operator on selected registers, identity elsewhere.

    Args:
        op: Operator on the target registers, indexed in the order given by ``targets``
        layout: Full register layout
        targets: Register indices or labels the operator acts on

    Returns:
        Operator on the full space
    """
    targets = layout.indices(targets)
    n = layout.num_registers
    rest = [i for i in range(n) if i not in targets]
    target_dim = int(np.prod([layout.dims[i] for i in targets]))
    op = np.asarray(op, dtype=complex)
    if op.shape != (target_dim, target_dim):
        raise DimensionMismatchException(
            f"Operator shape {op.shape} does not match target registers {targets}",
            code="NUM011",
            context={"shape": list(op.shape), "targets": targets},
        )

    rest_dim = int(np.prod([layout.dims[i] for i in rest])) if rest else 1
    full = kron(op, np.eye(rest_dim))
    order = targets + rest
    tensor = full.reshape([layout.dims[i] for i in order] * 2)
    inverse = [order.index(k) for k in range(n)]
    tensor = tensor.transpose(inverse + [n + p for p in inverse])
    return tensor.reshape(layout.total_dim, layout.total_dim)


def matexp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a Padé core.

    Raises:
        DimensionMismatchException: If ``a`` is not square
    """
    a = np.asarray(a, dtype=complex)
    require_square(a, "matexp input")
    return expm(a)


def schatten_norm(a: np.ndarray, p: int) -> float:
    """Schatten p-norm for p in {1, 2}.

    Args:
        a: Any matrix
        p: 1 (trace norm, sum of singular values) or 2 (Hilbert-Schmidt norm)

    Raises:
        NumericsException: If p is not supported
    """
    a = np.asarray(a, dtype=complex)
    if p == 2:
        return float(np.sqrt(np.sum(np.abs(a) ** 2)))
    if p == 1:
        return float(np.sum(np.linalg.svd(a, compute_uv=False)))
    raise NumericsException(
        f"Unsupported Schatten norm order p={p}; use 1 or 2",
        code="NUM012",
        context={"p": p},
    )


def hermitian_trace_norm(a: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix from the eigenvalues of its hermitized part."""
    a = np.asarray(a, dtype=complex)
    return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (a + dagger(a))))))


def trace_distance(
    rho: Union[DensityMatrix, np.ndarray],
    sigma: Union[DensityMatrix, np.ndarray],
) -> float:
    """Normalized trace distance ``0.5 * ||rho - sigma||_1``.

    The arguments are put in a canonical order before subtracting, so the result is
    exactly symmetric.

    Raises:
        DimensionMismatchException: If the dimensions differ
    """
    a = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    b = sigma.mat if isinstance(sigma, DensityMatrix) else np.asarray(sigma, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatchException(
            f"Cannot compare states of shapes {a.shape} and {b.shape}",
            code="NUM013",
            context={"shape_a": list(a.shape), "shape_b": list(b.shape)},
        )
    if a.tobytes() > b.tobytes():
        a, b = b, a
    value = 0.5 * hermitian_trace_norm(a - b)
    return min(1.0, max(0.0, value))


def maximally_entangled_vector(d: int, normalized: bool = False) -> np.ndarray:
    """The vector ``sum_i |i>|i>``, optionally divided by ``sqrt(d)``.

    Raises:
        NumericsException: If d < 1
    """
    if d < 1:
        raise NumericsException(
            f"Dimension must be positive, got {d}",
            code="NUM014",
            context={"d": d},
        )
    gamma = np.eye(d, dtype=complex).reshape(-1)
    return gamma / np.sqrt(d) if normalized else gamma


def swap_matrix(d: int) -> np.ndarray:
    """The swap ``sum_{i,j} |i><j| (x) |j><i|`` on two d-dimensional registers.

    Raises:
        NumericsException: If d < 1
    """
    if d < 1:
        raise NumericsException(
            f"Dimension must be positive, got {d}",
            code="NUM014",
            context={"d": d},
        )
    swap = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            swap[i * d + j, j * d + i] = 1.0
    return swap


def project_to_density(x: np.ndarray) -> tuple[DensityMatrix, float]:
    """Project a nearly valid state back onto the density-matrix set.

    Hermitizes, clips negative eigenvalues to zero and renormalizes the trace.

    Args:
        x: Square matrix within ``projection_tol`` of Hermitian and unit trace

    Returns:
        Tuple of (projected state, Schatten-2 norm of the applied correction)

    Raises:
        NumericalDriftException: If the drift is beyond what roundoff explains
    """
    x = np.asarray(x, dtype=complex)
    require_square(x, "projection input")
    tol = get_config().numerics.projection_tol

    herm_defect = float(np.linalg.norm(x - dagger(x)))
    trace_defect = abs(complex(np.trace(x)) - 1.0)
    if herm_defect > tol or trace_defect > tol:
        raise NumericalDriftException(
            "Matrix too far from a density matrix to project "
            f"(hermiticity defect {herm_defect:.3e}, trace defect {trace_defect:.3e})",
            code="NUM015",
            context={"hermiticity_defect": herm_defect, "trace_defect": trace_defect, "tol": tol},
        )

    hermitian = 0.5 * (x + dagger(x))
    evals, evecs = np.linalg.eigh(hermitian)
    if evals.min() < 0.0:
        evals = np.clip(evals, 0.0, None)
        projected = (evecs * evals) @ dagger(evecs)
    else:
        projected = hermitian
    projected = projected / np.trace(projected).real
    projected = 0.5 * (projected + dagger(projected))

    correction = float(np.linalg.norm(projected - x))
    return DensityMatrix(projected), correction


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization, so that ``vec(A X B) = kron(B.T, A) @ vec(X)``."""
    return np.asarray(x, dtype=complex).T.reshape(-1)


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    """Inverse of :func:`vec` for a ``d x d`` matrix."""
    return np.asarray(v, dtype=complex).reshape(d, d).T
