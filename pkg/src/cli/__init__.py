"""Command-line front end: verification suites, single simulations and convergence sweeps."""

from .commands import (
    COMMANDS,
    EXIT_CHECK_FAILED,
    EXIT_INVALID_CONFIG,
    EXIT_IO,
    EXIT_OK,
    cmd_simulate,
    cmd_sweep,
    cmd_verify,
    exit_code_for,
    run_command,
)
from .config import RunConfig, build_run_config, load_run_file

__all__ = [
    "COMMANDS",
    "EXIT_CHECK_FAILED",
    "EXIT_INVALID_CONFIG",
    "EXIT_IO",
    "EXIT_OK",
    "RunConfig",
    "build_run_config",
    "cmd_simulate",
    "cmd_sweep",
    "cmd_verify",
    "exit_code_for",
    "load_run_file",
    "run_command",
]
