"""Seeded random test inputs.

Every generator takes an integer seed and an optional stream index and draws from
``PCG64`` seeded through ``SeedSequence(seed, spawn_key=(stream,))``. The same
``(seed, stream)`` pair always gives bit-identical output; different streams are
statistically independent, so a state and an operator drawn for the same trial seed do
not share random numbers. Trial ``i`` of a suite uses seed ``base_seed + i``.
"""

import numpy as np

from src.shared.exceptions import NumericsException

from .types import DensityMatrix, StateVector

# Stream indices used by the verification suites
STREAM_STATE = 0
STREAM_OPERATOR = 1
STREAM_PURE = 2
STREAM_HERMITIAN = 3


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Create the PCG64 generator for a seed and stream index."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(stream),))))


def _check_dim(d: int) -> None:
    if d < 1:
        raise NumericsException(
            f"Dimension must be positive, got {d}",
            code="NUM014",
            context={"d": d},
        )


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Standard complex Gaussian matrix."""
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_density_matrix(d: int, seed: int, stream: int = STREAM_STATE) -> DensityMatrix:
    """Random full-rank density matrix ``G G^dagger / Tr[G G^dagger]``.

    Args:
        d: Dimension
        seed: Integer seed
        stream: Independent stream index

    Returns:
        Density matrix drawn from the Hilbert-Schmidt measure

    Raises:
        NumericsException: If d < 1
    """
    _check_dim(d)
    g = _ginibre(make_rng(seed, stream), d, d)
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def random_unit_hs_operator(d: int, seed: int, stream: int = STREAM_OPERATOR) -> np.ndarray:
    """Random complex Gaussian matrix divided by its Schatten-2 norm.

    Raises:
        NumericsException: If d < 1
    """
    _check_dim(d)
    g = _ginibre(make_rng(seed, stream), d, d)
    return g / np.linalg.norm(g)


def random_pure_state(d: int, seed: int, stream: int = STREAM_PURE) -> StateVector:
    """Random normalized complex Gaussian vector.

    Raises:
        NumericsException: If d < 1
    """
    _check_dim(d)
    v = _ginibre(make_rng(seed, stream), d, 1).reshape(-1)
    return StateVector(v / np.linalg.norm(v))


def random_hermitian(d: int, seed: int, stream: int = STREAM_HERMITIAN) -> np.ndarray:
    """Random Hermitian matrix ``(G + G^dagger) / 2``.

    Raises:
        NumericsException: If d < 1
    """
    _check_dim(d)
    g = _ginibre(make_rng(seed, stream), d, d)
    return 0.5 * (g + g.conj().T)
