"""Program states that carry a Lindblad operator (and optionally a Hamiltonian)."""

from dataclasses import dataclass, field
from math import isqrt
from typing import Any, NamedTuple

import numpy as np

from src.numerics import DensityMatrix, StateVector, as_readonly, kron
from src.shared.exceptions import DimensionMismatchException, ProgramEncodingException, SerializationException
from src.shared.serialization import format_float


@dataclass(frozen=True, eq=False)
class ProgramState:
    """State ``psi = (L (x) I)|Gamma>`` on registers (P, Q).

    Amplitude ``i * d + j`` holds ``L[i, j]``.

    Attributes:
        d: Local dimension
        psi: Unit vector on ``d^2`` dimensions
    """

    d: int
    psi: StateVector

    def __post_init__(self) -> None:
        if self.psi.dim != self.d * self.d:
            raise ProgramEncodingException(
                f"Program state on local dimension {self.d} needs {self.d * self.d} amplitudes, "
                f"got {self.psi.dim}",
                code="PROG002",
                context={"d": self.d, "amplitudes": self.psi.dim},
            )

    @property
    def amplitudes(self) -> np.ndarray:
        return self.psi.amplitudes

    def density(self) -> np.ndarray:
        """Return ``|psi><psi|`` on (P, Q)."""
        return self.psi.projector()

    def to_json(self) -> dict[str, Any]:
        return {
            "d": self.d,
            "amplitudes_re": [float(x) for x in self.amplitudes.real],
            "amplitudes_im": [float(x) for x in self.amplitudes.imag],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "ProgramState":
        """Decode ``{"d", "amplitudes_re", "amplitudes_im"}`` JSON.

        Raises:
            SerializationException: If fields are missing or malformed
        """
        try:
            d = int(obj["d"])
            re = np.asarray(obj["amplitudes_re"], dtype=float)
            im = np.asarray(obj.get("amplitudes_im", np.zeros_like(re)), dtype=float)
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise SerializationException(
                f"Invalid program state JSON: {e}",
                code="IO009",
                context={"error": str(e)},
            ) from e
        if re.shape != im.shape or re.ndim != 1:
            raise SerializationException(
                "Program state JSON needs flat amplitude arrays of equal length",
                code="IO009",
                context={"re_shape": list(re.shape), "im_shape": list(im.shape)},
            )
        return cls(d, StateVector(re + 1j * im))


@dataclass(frozen=True, eq=False)
class ProgramTriple:
    """Algorithm-2 program ``omega = sigma (x) |psi><psi|`` on registers (H, P, Q).

    Attributes:
        d: Local dimension
        sigma: Density matrix encoding the Hamiltonian
        psi: Program state encoding the Lindblad operator
        omega: The ``d^3``-dimensional product state, derived on construction
    """

    d: int
    sigma: DensityMatrix
    psi: ProgramState
    omega: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.sigma.dim != self.d or self.psi.d != self.d:
            raise DimensionMismatchException(
                f"sigma (dim {self.sigma.dim}) and psi (d {self.psi.d}) must share local dimension {self.d}",
                code="PROG007",
                context={"d": self.d, "sigma_dim": self.sigma.dim, "psi_d": self.psi.d},
            )
        object.__setattr__(self, "omega", as_readonly(kron(self.sigma.mat, self.psi.density())))

    def density(self) -> np.ndarray:
        return self.omega


@dataclass(frozen=True, eq=False)
class RescaledTask:
    """Unit-norm Lindblad operator with its stretched evolution time.

    Simulating ``normalized_op`` for ``rescaled_time`` equals simulating the original
    operator for ``time``, since the generator is quadratic in L.

    Attributes:
        normalized_op: ``l_prime / ||l_prime||_2``
        original_norm_sq: ``||l_prime||_2^2``
        rescaled_time: ``original_norm_sq * time``
        time: Requested time
    """

    normalized_op: np.ndarray
    original_norm_sq: float
    rescaled_time: float
    time: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "normalized_op", as_readonly(self.normalized_op))

    def rescale_hamiltonian(self, h: np.ndarray) -> np.ndarray:
        """Hamiltonian to pair with the stretched time: ``h / ||l_prime||_2^2``."""
        return np.asarray(h, dtype=complex) / self.original_norm_sq

    def to_json(self) -> dict[str, Any]:
        return {
            "original_norm_sq": self.original_norm_sq,
            "time": self.time,
            "rescaled_time": self.rescaled_time,
        }


class HamiltonianEncoding(NamedTuple):
    """Affine encoding ``sigma = (h + shift I) / time_scale`` of a Hermitian matrix."""

    sigma: DensityMatrix
    time_scale: float
    shift: float

    def describe(self) -> str:
        return f"shift={format_float(self.shift)} time_scale={format_float(self.time_scale)}"


def local_dim_from_amplitudes(count: int) -> int:
    """Return d for ``d^2`` amplitudes.

    Raises:
        ProgramEncodingException: If the count is not a perfect square
    """
    d = isqrt(count)
    if d * d != count or d < 1:
        raise ProgramEncodingException(
            f"Amplitude count {count} is not a perfect square",
            code="PROG002",
            context={"amplitudes": count},
        )
    return d