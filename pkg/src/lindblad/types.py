"""Lindbladian specifications, superoperators and quantum channels."""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from src.numerics import as_readonly, require_square, vec
from src.shared.config import get_config
from src.shared.exceptions import DimensionMismatchException, LindbladException, SerializationException
from src.shared.serialization import matrix_from_json, matrix_to_json


@dataclass(frozen=True, eq=False)
class LindbladianSpec:
    """Generator ``-i[H, rho] + sum_k (L_k rho L_k^dagger - {L_k^dagger L_k, rho} / 2)``.

    Attributes:
        dim: Dimension of the system
        hamiltonian: Optional Hermitian matrix H
        lindblad_ops: Lindblad operators L_k, each ``dim x dim``
    """

    dim: int
    hamiltonian: Optional[np.ndarray] = None
    lindblad_ops: tuple[np.ndarray, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise LindbladException(
                f"Lindbladian dimension must be positive, got {self.dim}",
                code="LIND001",
                context={"dim": self.dim},
            )

        if self.hamiltonian is not None:
            h = as_readonly(np.asarray(self.hamiltonian))
            self._check_shape(h, "hamiltonian")
            defect = float(np.linalg.norm(h - h.conj().T))
            if defect > get_config().numerics.hermitian_tol:
                raise LindbladException(
                    f"Hamiltonian is not Hermitian (defect {defect:.3e})",
                    code="LIND002",
                    context={"defect": defect},
                )
            object.__setattr__(self, "hamiltonian", h)

        ops = tuple(as_readonly(np.asarray(op)) for op in self.lindblad_ops)
        for k, op in enumerate(ops):
            self._check_shape(op, f"lindblad_ops[{k}]")
        object.__setattr__(self, "lindblad_ops", ops)

    def _check_shape(self, mat: np.ndarray, name: str) -> None:
        require_square(mat, name)
        if mat.shape[0] != self.dim:
            raise DimensionMismatchException(
                f"{name} has dimension {mat.shape[0]}, expected {self.dim}",
                code="LIND003",
                context={"name": name, "dim": int(mat.shape[0]), "expected": self.dim},
            )

    @classmethod
    def single(cls, l: np.ndarray, hamiltonian: Optional[np.ndarray] = None) -> "LindbladianSpec":
        """Spec with a single Lindblad operator and an optional Hamiltonian."""
        l = np.asarray(l, dtype=complex)
        return cls(dim=int(l.shape[0]), hamiltonian=hamiltonian, lindblad_ops=(l,))

    @classmethod
    def unitary(cls, hamiltonian: np.ndarray) -> "LindbladianSpec":
        h = np.asarray(hamiltonian, dtype=complex)
        return cls(dim=int(h.shape[0]), hamiltonian=h)

    def to_json(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "hamiltonian": None if self.hamiltonian is None else matrix_to_json(self.hamiltonian),
            "lindblad_ops": [matrix_to_json(op) for op in self.lindblad_ops],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "LindbladianSpec":
        """Build a spec from ``{"dim", "hamiltonian", "lindblad_ops"}`` JSON.

        Raises:
            SerializationException: If a matrix entry is malformed
            LindbladException: If the decoded spec is invalid
        """
        if not isinstance(obj, dict) or "dim" not in obj:
            raise SerializationException(
                "Lindbladian JSON must be an object with a 'dim' field",
                code="IO008",
            )
        h = obj.get("hamiltonian")
        return cls(
            dim=int(obj["dim"]),
            hamiltonian=None if h is None else matrix_from_json(h),
            lindblad_ops=tuple(matrix_from_json(op) for op in obj.get("lindblad_ops", [])),
        )


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Linear map on ``dim x dim`` matrices acting on column-stacked vectors.

    Attributes:
        dim: Dimension d of the underlying space
        mat: ``d^2 x d^2`` matrix
    """

    dim: int
    mat: np.ndarray

    def __post_init__(self) -> None:
        mat = as_readonly(np.asarray(self.mat))
        size = self.dim * self.dim
        if mat.shape != (size, size):
            raise DimensionMismatchException(
                f"Superoperator on dimension {self.dim} must be {size}x{size}, got {mat.shape}",
                code="LIND004",
                context={"dim": self.dim, "shape": list(mat.shape)},
            )
        object.__setattr__(self, "mat", mat)

    @classmethod
    def identity(cls, dim: int) -> "Superoperator":
        return cls(dim, np.eye(dim * dim, dtype=complex))


def choi_from_superop(superop: Superoperator) -> np.ndarray:
    """Choi state ``(I (x) ch)(|Gamma><Gamma| / d)`` of a superoperator.

    Entry ``[(i, a), (j, b)]`` is ``ch(|i><j|)[a, b] / d``.
    """
    d = superop.dim
    # tensor[b, a, j, i] = ch(|i><j|)[a, b] under column stacking
    tensor = np.asarray(superop.mat).reshape(d, d, d, d)
    return tensor.transpose(3, 1, 2, 0).reshape(d * d, d * d) / d


def trace_defect(superop: Superoperator) -> float:
    """Max deviation of ``vec(I)^dagger S`` from ``vec(I)^dagger``."""
    v = vec(np.eye(superop.dim))
    return float(np.max(np.abs(v.conj() @ superop.mat - v.conj())))


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Completely positive trace-preserving map.

    Trace preservation is always checked on construction. Choi positivity is checked for
    channels up to ``choi_check_max_dim``; larger channels are checked on demand with
    :func:`src.lindblad.channel.check_cptp`.

    Attributes:
        superop: Superoperator of the channel
    """

    superop: Superoperator

    def __post_init__(self) -> None:
        cfg = get_config().numerics
        defect = trace_defect(self.superop)
        if defect > cfg.channel_tol:
            raise LindbladException(
                f"Channel is not trace preserving (defect {defect:.3e})",
                code="LIND005",
                context={"defect": defect, "tol": cfg.channel_tol},
            )
        if self.superop.dim <= cfg.choi_check_max_dim:
            min_eig = float(np.linalg.eigvalsh(_hermitized(choi_from_superop(self.superop))).min())
            if min_eig < -cfg.channel_tol:
                raise LindbladException(
                    f"Channel is not completely positive (Choi eigenvalue {min_eig:.3e})",
                    code="LIND006",
                    context={"min_eigenvalue": min_eig, "tol": cfg.channel_tol},
                )

    @property
    def dim(self) -> int:
        return self.superop.dim

    @property
    def mat(self) -> np.ndarray:
        return self.superop.mat

    @classmethod
    def identity(cls, dim: int) -> "QuantumChannel":
        return cls(Superoperator.identity(dim))

    @classmethod
    def completely_depolarizing(cls, dim: int) -> "QuantumChannel":
        """The channel ``X -> Tr[X] I / d``."""
        v = vec(np.eye(dim))
        return cls(Superoperator(dim, np.outer(v, v.conj()) / dim))

    def compose(self, other: "QuantumChannel") -> "QuantumChannel":
        """Return ``self o other``: apply ``other`` first, then ``self``."""
        if other.dim != self.dim:
            raise DimensionMismatchException(
                f"Cannot compose channels on dimensions {self.dim} and {other.dim}",
                code="LIND007",
                context={"dim_a": self.dim, "dim_b": other.dim},
            )
        return QuantumChannel(Superoperator(self.dim, self.mat @ other.mat))

    def power(self, k: int) -> "QuantumChannel":
        """Return the k-fold composition; ``k = 0`` gives the identity channel."""
        if k < 0:
            raise LindbladException(
                f"Channel power must be non-negative, got {k}",
                code="LIND008",
                context={"k": k},
            )
        return QuantumChannel(Superoperator(self.dim, np.linalg.matrix_power(np.asarray(self.mat), k)))


def _hermitized(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)
