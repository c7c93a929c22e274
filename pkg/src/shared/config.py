"""Configuration management for the WML simulator.

Provides centralized, type-safe configuration using Pydantic with support
for environment variables. Numerical tolerances, dimension caps and sweep
defaults are read from here instead of being hardcoded at call sites.
"""

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class NumericsConfig(BaseSettings):
    """Tolerances of the dense linear-algebra kernel.

    Attributes:
        hermitian_tol: Max Schatten-2 distance between a density matrix and its adjoint
        trace_tol: Max deviation of a density matrix trace from one
        psd_tol: Max magnitude of a negative eigenvalue tolerated in a density matrix
        norm_tol: Tolerance of the unit Schatten-2 norm guard on Lindblad operators
        state_norm_tol: Tolerance of the unit norm of state vectors
        projection_tol: Max drift that project_to_density is allowed to repair
        channel_tol: Tolerance of the trace-preservation and Choi positivity checks on channels
        choi_check_max_dim: Largest channel dimension whose Choi spectrum is checked on construction
    """

    hermitian_tol: float = Field(default=1e-10, gt=0.0, le=1e-3)
    trace_tol: float = Field(default=1e-10, gt=0.0, le=1e-3)
    psd_tol: float = Field(default=1e-10, gt=0.0, le=1e-3)
    norm_tol: float = Field(default=1e-10, gt=0.0, le=1e-3)
    state_norm_tol: float = Field(default=1e-12, gt=0.0, le=1e-3)
    projection_tol: float = Field(default=1e-6, gt=0.0, le=1e-2)
    channel_tol: float = Field(default=1e-9, gt=0.0, le=1e-3)
    choi_check_max_dim: int = Field(default=27, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="NUMERICS_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )


class SimulationConfig(BaseSettings):
    """Configuration of the WML step loops.

    Attributes:
        threads: Worker process cap for sweeps (``WML_THREADS``); None means all cores
        max_drift: Per-step projection correction above which a step is declared broken
        max_time: Largest evolution time accepted by the exact oracle
        max_dim: Largest local dimension without a reference register
        max_dim_with_reference: Largest local dimension with a reference register
        max_dilated_dim: Largest dilated space dimension for a dense step channel
        generator_cache_size: Dilated generators kept per process; each holds a dense step channel
    """

    threads: Optional[int] = Field(default=None, ge=1, le=1024)
    max_drift: float = Field(default=1e-8, gt=0.0, le=1e-3)
    max_time: float = Field(default=1e3, gt=0.0)
    max_dim: int = Field(default=4, ge=1, le=8)
    max_dim_with_reference: int = Field(default=3, ge=1, le=8)
    max_dilated_dim: int = Field(default=81, ge=1, le=256)
    generator_cache_size: int = Field(default=2, ge=0, le=64)

    model_config = SettingsConfigDict(
        env_prefix="WML_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )


class VerifyConfig(BaseSettings):
    """Defaults of the identity verification suites.

    Attributes:
        trials: Random (L, rho) pairs per identity
        seed: Base seed; trial i uses seed + i
        tol: Residual tolerance of exact identities
        taylor_slope: Expected log-log slope of the first-order Taylor remainder
        taylor_band: Accepted deviation from taylor_slope
        phi_trials: Random phi vectors drawn by the phi invariance checks
    """

    trials: int = Field(default=100, ge=1, le=100000)
    seed: int = Field(default=42, ge=0)
    tol: float = Field(default=1e-10, gt=0.0)
    taylor_slope: float = Field(default=2.0)
    taylor_band: float = Field(default=0.1, gt=0.0)
    phi_trials: int = Field(default=10, ge=1, le=10000)

    model_config = SettingsConfigDict(
        env_prefix="VERIFY_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )


class SweepConfig(BaseSettings):
    """Defaults of the convergence sweeps.

    Attributes:
        steps_list: Copy counts n swept at fixed time
        trials: Random inputs per n
        time: Evolution time of a fixed-time sweep
        slope_target: Expected log-log slope of error against n
        slope_band: Accepted deviation from slope_target
        flatness_factor: Max ratio of errors at fixed t^2/n
        time_list: Times used by the fixed-ratio check
        fixed_ratio: t^2/n used when --fixed-ratio is given without a value
    """

    steps_list: list[int] = Field(default_factory=lambda: [10, 100, 1000, 10000])
    trials: int = Field(default=10, ge=1, le=10000)
    time: float = Field(default=1.0, ge=0.0)
    slope_target: float = Field(default=-1.0)
    slope_band: float = Field(default=0.15, gt=0.0)
    flatness_factor: float = Field(default=4.0, ge=1.0)
    time_list: list[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0])
    fixed_ratio: float = Field(default=1e-3, gt=0.0)

    model_config = SettingsConfigDict(
        env_prefix="SWEEP_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )


class TemplateConfig(BaseSettings):
    """Configuration for Jinja2 report templates.

    Attributes:
        templates_dir: Directory containing Jinja2 templates
        autoescape: Whether to enable autoescaping in templates
        trim_blocks: Whether to trim blocks in templates
        lstrip_blocks: Whether to lstrip blocks in templates
    """

    templates_dir: Path = Field(default=Path(__file__).parent.parent / "cli" / "templates")
    autoescape: bool = Field(default=False)
    trim_blocks: bool = Field(default=True)
    lstrip_blocks: bool = Field(default=True)

    model_config = SettingsConfigDict(
        env_prefix="TEMPLATE_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )

    def get_templates_path(self) -> Path:
        """Get the absolute path to templates directory.

        Returns:
            Absolute path to templates directory

        Raises:
            ConfigurationException: If templates directory doesn't exist
        """
        from src.shared.exceptions import ConfigurationException

        templates_path = self.templates_dir.resolve()
        if not templates_path.exists():
            raise ConfigurationException(
                f"Templates directory not found: {templates_path}",
                code="TEMPLATE001",
                context={"path": str(templates_path)}
            )
        return templates_path


class LogConfig(BaseSettings):
    """Configuration for logging.

    Attributes:
        level: Log level (DEBUG, INFO, WARNING, ERROR)
        verbose: Whether to enable verbose output
        show_timestamps: Whether to prefix messages with a timestamp
    """

    level: str = Field(default="INFO")
    verbose: bool = Field(default=False)
    show_timestamps: bool = Field(default=False)

    model_config = SettingsConfigDict(
        env_prefix="LOG_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )


class AppConfig(BaseSettings):
    """Main application configuration.

    Aggregates all configuration sections and provides a single entry point.

    Attributes:
        numerics: Kernel tolerances
        simulation: Step-loop limits and worker cap
        verify: Verification suite defaults
        sweep: Convergence sweep defaults
        template: Template configuration
        log: Logging configuration
    """

    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    verify: VerifyConfig = Field(default_factory=VerifyConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    template: TemplateConfig = Field(default_factory=TemplateConfig)
    log: LogConfig = Field(default_factory=LogConfig)

    model_config = SettingsConfigDict(
        env_prefix="APP_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )


# Global configuration instance
_config: Optional[AppConfig] = None


def get_config() -> AppConfig:
    """Get the global configuration instance.

    Returns:
        The global AppConfig instance

    Example:
        >>> config = get_config()
        >>> tol = config.numerics.hermitian_tol
        >>> cap = config.simulation.max_dilated_dim
    """
    global _config
    if _config is None:
        _config = AppConfig()
    return _config


def reset_config() -> None:
    """Reset the global configuration instance.

    Useful for testing or when configuration needs to be reloaded.
    """
    global _config
    _config = None
