"""Input file loaders of the command-line front end."""

from pathlib import Path
from typing import Optional

import numpy as np

from src.lindblad import LindbladianSpec
from src.numerics import DensityMatrix, StateVector
from src.shared.exceptions import ConfigurationException
from src.shared.serialization import matrix_from_json, read_json, vector_from_json


def load_matrix(path: Path) -> np.ndarray:
    """Read a Matrix JSON file (``{"dim", "re", "im"}``).

    Raises:
        SerializationException: If the file is unreadable or malformed
    """
    return matrix_from_json(read_json(path))


def load_lindblad(path: Path) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Read a Lindblad operator and an optional Hamiltonian.

    The file holds either a single Matrix JSON or a LindbladianSpec JSON with exactly one
    Lindblad operator.

    Returns:
        ``(l, hamiltonian)``; the Hamiltonian is None for Matrix JSON

    Raises:
        SerializationException: If the file is unreadable or malformed
        ConfigurationException: If a spec holds other than one Lindblad operator
    """
    obj = read_json(path)
    if isinstance(obj, dict) and "lindblad_ops" in obj:
        spec = LindbladianSpec.from_json(obj)
        if len(spec.lindblad_ops) != 1:
            raise ConfigurationException(
                f"{path} holds {len(spec.lindblad_ops)} Lindblad operators; WML simulates exactly one",
                code="CLI004",
                context={"path": str(path), "count": len(spec.lindblad_ops)},
            )
        return np.array(spec.lindblad_ops[0]), (None if spec.hamiltonian is None else np.array(spec.hamiltonian))
    return matrix_from_json(obj), None


def load_density(path: Path) -> DensityMatrix:
    """Read a density matrix from Matrix JSON.

    Raises:
        SerializationException: If the file is unreadable or malformed
        NumericsException: If the matrix is not a density matrix
    """
    return DensityMatrix(load_matrix(path))


def load_phi(path: Path) -> StateVector:
    """Read the unit vector phi on ``d^2`` from state-vector JSON."""
    return StateVector(vector_from_json(read_json(path)))
