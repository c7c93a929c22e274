"""Dense complex-matrix kernel: states, registers, tensor algebra and seeded random inputs."""

from .linalg import (
    anticommutator,
    commutator,
    dagger,
    embed_operator,
    hermitian_trace_norm,
    kron,
    matexp,
    maximally_entangled_vector,
    partial_trace,
    project_to_density,
    schatten_norm,
    swap_matrix,
    trace_distance,
    unvec,
    vec,
)
from .sampling import (
    make_rng,
    random_density_matrix,
    random_hermitian,
    random_pure_state,
    random_unit_hs_operator,
)
from .types import DensityMatrix, RegisterLayout, StateVector, as_readonly, require_square

__all__ = [
    "DensityMatrix",
    "RegisterLayout",
    "StateVector",
    "anticommutator",
    "as_readonly",
    "commutator",
    "dagger",
    "embed_operator",
    "hermitian_trace_norm",
    "kron",
    "make_rng",
    "matexp",
    "maximally_entangled_vector",
    "partial_trace",
    "project_to_density",
    "random_density_matrix",
    "random_hermitian",
    "random_pure_state",
    "random_unit_hs_operator",
    "require_square",
    "schatten_norm",
    "swap_matrix",
    "trace_distance",
    "unvec",
    "vec",
]
