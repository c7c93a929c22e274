"""Pytest fixtures for unit tests.

Provides shared fixtures and test utilities used across all unit tests.
"""

import tempfile
from collections.abc import Generator
from pathlib import Path

import numpy as np
import pytest
from jinja2 import Environment, FileSystemLoader

from src.shared.serialization import matrix_to_json, write_json


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for test files.

    Yields:
        Path to temporary directory that is automatically cleaned up after test
    """
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def temp_file(temp_dir: Path) -> Path:
    """Create a temporary file path (the file is not created)."""
    return temp_dir / "test_file.json"


@pytest.fixture
def sample_template_dir(temp_dir: Path) -> Path:
    """Create a directory with sample templates for testing.

    Returns:
        Path to directory containing sample templates
    """
    template_dir = temp_dir / "templates"
    template_dir.mkdir()

    (template_dir / "simple.j2").write_text("Residual {{ name }}!")
    (template_dir / "table.j2").write_text(
        "d={{ dim }}\n{% for row in rows %}{{ row.name }}={{ row.value }}\n{% endfor %}"
    )
    (template_dir / "broken.j2").write_text("{{ missing.attribute.chain }}")

    return template_dir


@pytest.fixture
def jinja_env(sample_template_dir: Path) -> Environment:
    """Create a Jinja2 environment over the sample templates."""
    return Environment(
        loader=FileSystemLoader(str(sample_template_dir)),
        autoescape=False,
        trim_blocks=True,
        lstrip_blocks=True,
    )


@pytest.fixture
def amplitude_damping() -> np.ndarray:
    """L = |0><1| on a qubit."""
    return np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


@pytest.fixture
def excited_state() -> np.ndarray:
    """rho = |1><1| on a qubit."""
    return np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


@pytest.fixture
def pauli_z() -> np.ndarray:
    return np.diag([1.0, -1.0]).astype(complex)


@pytest.fixture
def write_matrix(temp_dir: Path):
    """Write a matrix as Matrix JSON under temp_dir and return its path."""

    def _write(name: str, mat: np.ndarray) -> Path:
        return write_json(temp_dir / name, matrix_to_json(mat))

    return _write


@pytest.fixture(autouse=True)
def reset_config():
    """Reset global configuration before each test.

    This ensures tests don't interfere with each other through shared state.
    """
    from src.shared.config import reset_config

    reset_config()
    yield
    reset_config()


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    """Run sweeps in-process unless a test asks for workers."""
    monkeypatch.setenv("WML_THREADS", "1")
