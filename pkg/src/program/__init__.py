"""Program-state encoders for Lindblad operators and Hamiltonians."""

from .encoding import (
    build_program_triple,
    decode_program_state,
    encode_hamiltonian,
    encode_lindblad,
    program_amplitudes,
    rescale_task,
)
from .types import HamiltonianEncoding, ProgramState, ProgramTriple, RescaledTask

__all__ = [
    "HamiltonianEncoding",
    "ProgramState",
    "ProgramTriple",
    "RescaledTask",
    "build_program_triple",
    "decode_program_state",
    "encode_hamiltonian",
    "encode_lindblad",
    "program_amplitudes",
    "rescale_task",
]
