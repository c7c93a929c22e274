"""Exact Lindbladian dynamics: the reference oracle for every WML result."""

from .channel import (
    apply_channel,
    apply_channel_with_reference,
    check_cptp,
    choi_matrix,
    exact_channel,
)
from .generator import apply_lindbladian, to_superoperator
from .types import LindbladianSpec, QuantumChannel, Superoperator

__all__ = [
    "LindbladianSpec",
    "QuantumChannel",
    "Superoperator",
    "apply_channel",
    "apply_channel_with_reference",
    "apply_lindbladian",
    "check_cptp",
    "choi_matrix",
    "exact_channel",
    "to_superoperator",
]
