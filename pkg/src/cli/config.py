"""Run configuration of the command-line front end.

A RunConfig merges three sources, later ones winning: the defaults of the ``VERIFY_`` and
``SWEEP_`` settings sections, an optional YAML run file, and explicit command-line flags.
"""

from pathlib import Path
from typing import Any, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.shared.config import get_config
from src.shared.exceptions import ConfigurationException

Subcommand = Literal["verify", "simulate", "sweep"]

DEFAULT_OUTPUTS = {
    "verify": Path("verify_report.json"),
    "simulate": Path("simulation.json"),
    "sweep": Path("sweep.csv"),
}


def dimension_cap(with_reference: bool) -> int:
    sim = get_config().simulation
    return sim.max_dim_with_reference if with_reference else sim.max_dim


def require_dim_within_caps(dim: int, with_reference: bool = False) -> int:
    """Check ``2 <= dim <= cap`` for the local dimension of a run.

    Raises:
        ConfigurationException: If the dimension is out of range
    """
    cap = dimension_cap(with_reference)
    if not 2 <= dim <= cap:
        raise ConfigurationException(
            f"Local dimension must be in [2, {cap}]{' with a reference register' if with_reference else ''}, got {dim}",
            code="CLI001",
            context={"dim": dim, "cap": cap, "with_reference": with_reference},
        )
    return dim


class RunConfig(BaseModel):
    """Validated options of one verify, simulate or sweep run.

    Unset options are filled from the settings sections after validation, so a RunConfig
    always carries concrete values for seed, tolerance, trials, times and output path.
    """

    model_config = ConfigDict(extra="forbid")

    subcommand: Subcommand
    dim: int = 2
    seed: Optional[int] = Field(default=None, ge=0)
    tol: Optional[float] = Field(default=None, gt=0.0)
    trials: Optional[int] = Field(default=None, ge=1)
    time: Optional[float] = None
    steps: int = Field(default=1000, ge=1)
    steps_list: Optional[list[int]] = None
    algorithm: Literal[1, 2] = 1
    with_reference: bool = False
    phi: Optional[Path] = None
    lindblad: Optional[Path] = None
    hamiltonian: Optional[Path] = None
    rho: Optional[Path] = None
    auto_rescale: bool = False
    compare_exact: bool = False
    fixed_ratio: Optional[float] = Field(default=None, gt=0.0)
    time_list: Optional[list[float]] = None
    out: Optional[Path] = None

    @field_validator("time")
    @classmethod
    def _time_in_range(cls, value: Optional[float]) -> Optional[float]:
        if value is None:
            return value
        max_time = get_config().simulation.max_time
        if not 0.0 <= value <= max_time:
            raise ValueError(f"time must be in [0, {max_time}], got {value}")
        return value

    @field_validator("steps_list")
    @classmethod
    def _strictly_increasing(cls, value: Optional[list[int]]) -> Optional[list[int]]:
        if value is None:
            return value
        if any(n < 1 for n in value):
            raise ValueError(f"step counts must be positive, got {value}")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError(f"steps_list must be strictly increasing, got {value}")
        return value

    @field_validator("time_list")
    @classmethod
    def _non_negative_times(cls, value: Optional[list[float]]) -> Optional[list[float]]:
        if value is not None and (not value or any(t < 0 for t in value)):
            raise ValueError(f"time_list must hold non-negative times, got {value}")
        return value

    @model_validator(mode="after")
    def _fill_defaults(self) -> "RunConfig":
        cfg = get_config()
        cap = dimension_cap(self.with_reference)
        if not 2 <= self.dim <= cap:
            raise ValueError(f"dim must be in [2, {cap}], got {self.dim}")

        default_trials = cfg.sweep.trials if self.subcommand == "sweep" else cfg.verify.trials
        defaults = {
            "seed": cfg.verify.seed,
            "tol": cfg.verify.tol,
            "trials": default_trials,
            "time": cfg.sweep.time,
            "steps_list": list(cfg.sweep.steps_list),
            "time_list": list(cfg.sweep.time_list),
            "out": DEFAULT_OUTPUTS[self.subcommand],
        }
        for name, value in defaults.items():
            if getattr(self, name) is None:
                setattr(self, name, value)

        if self.subcommand == "sweep" and self.fixed_ratio is None and len(self.steps_list) < 3:
            raise ValueError(f"a sweep needs at least 3 step counts, got {self.steps_list}")
        return self


def load_run_file(path: Union[str, Path]) -> dict[str, Any]:
    """Read RunConfig options from a YAML run file.

    Keys may use dashes or underscores (``steps-list`` or ``steps_list``).

    Raises:
        ConfigurationException: If the file is missing, malformed or not a mapping
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationException(
            f"Run file not found: {path}",
            code="CLI002",
            context={"path": str(path)},
        )
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigurationException(
            f"Failed to parse run file {path}: {e}",
            code="CLI003",
            context={"path": str(path), "error": str(e)},
        ) from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationException(
            f"Run file {path} must contain a mapping, got {type(data).__name__}",
            code="CLI003",
            context={"path": str(path)},
        )
    return {str(key).replace("-", "_"): value for key, value in data.items()}


def build_run_config(
    subcommand: str,
    options: Optional[dict[str, Any]] = None,
    run_file: Optional[Union[str, Path]] = None,
) -> RunConfig:
    """Merge run-file values and explicit options into a validated RunConfig.

    Args:
        subcommand: "verify", "simulate" or "sweep"
        options: Explicitly given options; they override the run file
        run_file: Optional YAML run file

    Raises:
        ConfigurationException: If a value is missing, out of range or inconsistent
    """
    merged: dict[str, Any] = load_run_file(run_file) if run_file else {}
    merged.update({key: value for key, value in (options or {}).items() if value is not None})
    merged["subcommand"] = subcommand
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        problems = [f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()]
        raise ConfigurationException(
            f"Invalid {subcommand} configuration: {'; '.join(problems)}",
            code="CLI001",
            context={"errors": problems},
        ) from e
