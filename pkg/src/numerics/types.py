"""Validated value types of the numerical kernel.

Matrices are plain ``numpy`` complex arrays. States carry invariants, so they are wrapped in
frozen dataclasses whose arrays are copied and marked read-only on construction.
"""

from dataclasses import dataclass, field
from math import prod
from typing import Optional, Union

import numpy as np

from src.shared.config import get_config
from src.shared.exceptions import DimensionMismatchException, NumericalDriftException


def as_readonly(array: np.ndarray) -> np.ndarray:
    """Return a complex read-only copy of an array."""
    out = np.array(array, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def require_square(mat: np.ndarray, name: str = "matrix") -> int:
    """Check that a matrix is square and finite.

    Args:
        mat: Matrix to check
        name: Name used in error messages

    Returns:
        The matrix dimension

    Raises:
        DimensionMismatchException: If the matrix is not square
        NumericalDriftException: If the matrix holds NaN or Inf entries
    """
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchException(
            f"{name} must be square, got shape {mat.shape}",
            code="NUM001",
            context={"name": name, "shape": list(mat.shape)},
        )
    if not np.all(np.isfinite(mat)):
        raise NumericalDriftException(
            f"{name} has non-finite entries",
            code="NUM002",
            context={"name": name},
        )
    return int(mat.shape[0])


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit vector in a finite-dimensional Hilbert space.

    Attributes:
        amplitudes: Complex amplitudes (read-only copy)
        norm_tol: Accepted deviation of the Euclidean norm from one; None uses the
            configured ``state_norm_tol``
    """

    amplitudes: np.ndarray
    norm_tol: Optional[float] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        amps = as_readonly(np.asarray(self.amplitudes).reshape(-1))
        object.__setattr__(self, "amplitudes", amps)

        tol = self.norm_tol if self.norm_tol is not None else get_config().numerics.state_norm_tol
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > tol:
            raise NumericalDriftException(
                f"State vector norm {norm!r} deviates from 1 by more than {tol}",
                code="NUM003",
                context={"norm": norm, "tol": tol},
            )

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    def projector(self) -> np.ndarray:
        """Return the rank-one projector onto the vector."""
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_density(self) -> "DensityMatrix":
        """Return the pure density matrix of the vector."""
        return DensityMatrix(self.projector())


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Attributes:
        mat: The matrix (read-only copy)
    """

    mat: np.ndarray

    def __post_init__(self) -> None:
        mat = as_readonly(np.asarray(self.mat))
        object.__setattr__(self, "mat", mat)
        require_square(mat, "density matrix")

        cfg = get_config().numerics
        herm_defect = float(np.linalg.norm(mat - mat.conj().T))
        if herm_defect > cfg.hermitian_tol:
            raise NumericalDriftException(
                f"Density matrix is not Hermitian (defect {herm_defect:.3e})",
                code="NUM004",
                context={"defect": herm_defect},
            )
        trace_defect = abs(complex(np.trace(mat)) - 1.0)
        if trace_defect > cfg.trace_tol:
            raise NumericalDriftException(
                f"Density matrix trace deviates from 1 by {trace_defect:.3e}",
                code="NUM005",
                context={"defect": trace_defect},
            )
        min_eig = float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T)).min())
        if min_eig < -cfg.psd_tol:
            raise NumericalDriftException(
                f"Density matrix has negative eigenvalue {min_eig:.3e}",
                code="NUM006",
                context={"min_eigenvalue": min_eig},
            )

    @property
    def dim(self) -> int:
        return int(self.mat.shape[0])

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def basis(cls, dim: int, index: int) -> "DensityMatrix":
        """Return the projector onto computational basis vector ``index``."""
        mat = np.zeros((dim, dim), dtype=complex)
        mat[index, index] = 1.0
        return cls(mat)

    @classmethod
    def from_vector(cls, amplitudes: Union[np.ndarray, StateVector]) -> "DensityMatrix":
        if isinstance(amplitudes, StateVector):
            return amplitudes.to_density()
        return StateVector(np.asarray(amplitudes)).to_density()


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered per-register dimensions of a composite space.

    Register order follows the dilation convention: system first, then program registers.

    Attributes:
        dims: Dimension of each register, in order
        labels: Optional register names (e.g. ``("S", "P", "Q")``) for lookups by name
    """

    dims: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "labels", tuple(self.labels))
        if any(d < 1 for d in self.dims):
            raise DimensionMismatchException(
                f"Register dimensions must be positive: {self.dims}",
                code="NUM007",
                context={"dims": list(self.dims)},
            )
        if self.labels and len(self.labels) != len(self.dims):
            raise DimensionMismatchException(
                "Register labels and dimensions differ in length",
                code="NUM008",
                context={"dims": list(self.dims), "labels": list(self.labels)},
            )

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    @property
    def num_registers(self) -> int:
        return len(self.dims)

    def index(self, register: Union[int, str]) -> int:
        """Resolve a register label or index to its position.

        Raises:
            DimensionMismatchException: If the register does not exist
        """
        if isinstance(register, str):
            if register not in self.labels:
                raise DimensionMismatchException(
                    f"Unknown register label {register!r}",
                    code="NUM009",
                    context={"labels": list(self.labels), "register": register},
                )
            return self.labels.index(register)
        if not 0 <= register < len(self.dims):
            raise DimensionMismatchException(
                f"Register index {register} out of range",
                code="NUM009",
                context={"num_registers": len(self.dims), "register": register},
            )
        return int(register)

    def indices(self, registers) -> list[int]:
        return [self.index(r) for r in registers]

    def has(self, label: str) -> bool:
        return label in self.labels
