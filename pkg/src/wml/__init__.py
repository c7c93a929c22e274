"""Wave matrix Lindbladization: dilation, step channel and simulation loops."""

from .dilation import build_dilated_generator, build_hamiltonian_swap, build_m, mdagm_closed_form
from .simulate import (
    dme_simulate,
    effective_step_channel,
    hamiltonian_encoding_for,
    wml_channel,
    wml_simulate,
    wml_simulate_with_h,
    wml_simulate_with_reference,
    wml_step,
    wml_step_with_drift,
)
from .types import DilatedGenerator, DilationConfig, SimulationResult

__all__ = [
    "DilatedGenerator",
    "DilationConfig",
    "SimulationResult",
    "build_dilated_generator",
    "build_hamiltonian_swap",
    "build_m",
    "dme_simulate",
    "effective_step_channel",
    "hamiltonian_encoding_for",
    "mdagm_closed_form",
    "wml_channel",
    "wml_simulate",
    "wml_simulate_with_h",
    "wml_simulate_with_reference",
    "wml_step",
    "wml_step_with_drift",
]
