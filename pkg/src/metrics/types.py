"""Report types produced by the verification suites and convergence sweeps."""

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.shared.exceptions import VerificationException


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of checking an identity over random trials.

    Attributes:
        name: Identity label
        trials: Number of trials
        max_residual: Largest Schatten-2 residual over the trials
        tol: Tolerance the residual is compared against
    """

    name: str
    trials: int
    max_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tol)

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "trials": self.trials,
            "max_residual": float(self.max_residual),
            "tol": float(self.tol),
            "pass": self.passed,
        }


@dataclass(frozen=True)
class ConvergencePoint:
    """Per-trial distances at one step count (or one step size)."""

    n: int
    delta: float
    distances: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "distances", tuple(float(x) for x in self.distances))
        bad = [x for x in self.distances if not 0.0 <= x <= 1.0]
        if bad:
            raise VerificationException(
                f"Distances must lie in [0, 1], got {bad}",
                code="MET005",
                context={"n": self.n, "bad": bad},
            )

    @property
    def mean(self) -> float:
        return float(np.mean(self.distances)) if self.distances else 0.0

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "delta": float(self.delta), "mean": self.mean, "distances": list(self.distances)}


@dataclass(frozen=True)
class ErrorCurve:
    """Log-log least-squares fit of mean distance against n (or against delta).

    Attributes:
        points: Points sorted by n, or by delta when ``against == "delta"``
        fitted_slope: Slope of log(mean distance) against log(x)
        fitted_intercept: Intercept of the same fit
        r_squared: Coefficient of determination
        against: "n" or "delta"
    """

    points: tuple[ConvergencePoint, ...]
    fitted_slope: float
    fitted_intercept: float
    r_squared: float
    against: str = "n"

    def slope_within(self, target: float, band: float) -> bool:
        return bool(abs(self.fitted_slope - target) <= band)

    def to_json(self) -> dict[str, Any]:
        return {
            "against": self.against,
            "slope": float(self.fitted_slope),
            "intercept": float(self.fitted_intercept),
            "r_squared": float(self.r_squared),
            "points": [p.to_json() for p in self.points],
        }


@dataclass(frozen=True)
class ScalingReport:
    """Errors at a fixed ratio ``t^2 / n`` across several times.

    Attributes:
        ratio: The fixed ``t^2 / n``
        times: Evolution times
        steps: Step count used for each time
        errors: Mean trace distance to the exact evolution for each time
        factor: Largest accepted max/min error ratio
        rows: Per-trial SweepRow values behind the errors, sorted by (n, t, trial)
    """

    ratio: float
    times: tuple[float, ...]
    steps: tuple[int, ...]
    errors: tuple[float, ...]
    factor: float
    rows: tuple = ()
    spread: float = field(init=False)

    def __post_init__(self) -> None:
        nonzero = [e for e in self.errors if e > 0.0]
        spread = max(nonzero) / min(nonzero) if len(nonzero) >= 2 else 1.0
        object.__setattr__(self, "spread", float(spread))

    @property
    def passed(self) -> bool:
        return bool(self.spread <= self.factor)

    def to_json(self) -> dict[str, Any]:
        return {
            "ratio": float(self.ratio),
            "times": [float(t) for t in self.times],
            "steps": list(self.steps),
            "errors": [float(e) for e in self.errors],
            "max_min_ratio": self.spread,
            "factor": float(self.factor),
            "pass": self.passed,
        }


@dataclass(frozen=True)
class SweepRow:
    n: int
    delta: float
    trial: int
    distance: float
    # Evolution time; not written to the CSV
    t: float = 0.0

    def to_csv(self) -> list[Any]:
        return [self.n, float(self.delta), self.trial, float(self.distance)]


@dataclass(frozen=True)
class SweepResult:
    """Per-trial rows sorted by (n, trial) and their fitted curve."""

    rows: tuple[SweepRow, ...]
    curve: ErrorCurve
