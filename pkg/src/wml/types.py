"""Value types of the WML dilation and its simulation results."""

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from src.lindblad import QuantumChannel
from src.numerics import DensityMatrix, RegisterLayout, StateVector, as_readonly
from src.shared.exceptions import SimulationException
from src.shared.serialization import matrix_to_json

REFERENCE = "R"
SYSTEM = "S"
HAMILTONIAN = "H"
PROGRAM_P = "P"
PROGRAM_Q = "Q"


@dataclass(frozen=True, eq=False)
class DilationConfig:
    """Shape of the dilated space.

    Attributes:
        d: Local dimension of every register
        with_reference: Add a reference register R of dimension d in front of S
        phi: Optional unit vector on ``d^2`` replacing ``Gamma / sqrt(d)`` in M
    """

    d: int
    with_reference: bool = False
    phi: Optional[StateVector] = None

    def __post_init__(self) -> None:
        if self.d < 1:
            raise SimulationException(
                f"Local dimension must be positive, got {self.d}",
                code="WML001",
                context={"d": self.d},
            )
        if self.phi is not None and self.phi.dim != self.d * self.d:
            raise SimulationException(
                f"phi must live on {self.d * self.d} dimensions, got {self.phi.dim}",
                code="WML001",
                context={"d": self.d, "phi_dim": self.phi.dim},
            )

    @property
    def system_dim(self) -> int:
        """Dimension of the registers kept after each step (R and S)."""
        return self.d * self.d if self.with_reference else self.d

    def _key(self) -> tuple:
        phi = None if self.phi is None else self.phi.amplitudes.tobytes()
        return (self.d, self.with_reference, phi)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DilationConfig) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def layout(self, algorithm: int) -> RegisterLayout:
        """Register layout ``[R,] S, [H,] P, Q`` for an algorithm."""
        labels = ([REFERENCE] if self.with_reference else []) + [SYSTEM]
        if algorithm == 2:
            labels.append(HAMILTONIAN)
        labels += [PROGRAM_P, PROGRAM_Q]
        return RegisterLayout(tuple(self.d for _ in labels), tuple(labels))


@dataclass(frozen=True, eq=False)
class DilatedGenerator:
    """Lindbladian on the dilated space with its precomputed step channel.

    Attributes:
        config: Dilation shape
        algorithm: 1 (Lindblad operator only) or 2 (Hamiltonian and Lindblad operator)
        layout: Registers ``[R,] S, [H,] P, Q``
        m_op: Lindblad operator M on the full dilated space
        h_op: ``SWAP_{S,H}`` embedded in the dilated space (algorithm 2 only)
        hamiltonian_scale: Prefactor of ``h_op`` in the generator
        delta: Step time of ``step_channel``
        step_channel: ``exp(M delta)`` on the dilated space
    """

    config: DilationConfig
    algorithm: int
    layout: RegisterLayout
    m_op: np.ndarray
    h_op: Optional[np.ndarray]
    hamiltonian_scale: float
    delta: float
    step_channel: QuantumChannel

    def __post_init__(self) -> None:
        object.__setattr__(self, "m_op", as_readonly(self.m_op))
        if self.h_op is not None:
            object.__setattr__(self, "h_op", as_readonly(self.h_op))

    @property
    def system_labels(self) -> list[str]:
        return [label for label in (REFERENCE, SYSTEM) if self.layout.has(label)]

    @property
    def program_labels(self) -> list[str]:
        return [label for label in (HAMILTONIAN, PROGRAM_P, PROGRAM_Q) if self.layout.has(label)]

    @property
    def system_dim(self) -> int:
        return self.config.system_dim


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Outcome of an n-step simulation.

    Attributes:
        final_state: State after the last step
        steps: Number of program copies consumed
        delta: Step time ``t / n``
        drift_log: Projection correction of each step
        time: Requested evolution time
        algorithm: "1", "2" or "dme"
    """

    final_state: DensityMatrix
    steps: int
    delta: float
    drift_log: tuple[float, ...]
    time: float
    algorithm: str = "1"

    @property
    def max_drift(self) -> float:
        return max(self.drift_log, default=0.0)

    @property
    def total_drift(self) -> float:
        return float(sum(self.drift_log))

    def to_json(self) -> dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "time": float(self.time),
            "n": self.steps,
            "delta": float(self.delta),
            "max_drift": float(self.max_drift),
            "total_drift": self.total_drift,
            "final_state": matrix_to_json(self.final_state.mat),
        }
