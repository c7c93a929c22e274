"""The verify, simulate and sweep commands.

Each command takes a validated RunConfig, writes its output files and returns an exit code:
0 when every check passes, 1 when a check fails. Invalid configurations and I/O failures
raise, and :func:`exit_code_for` maps them to 2 and 3.
"""

from pathlib import Path
from typing import Any, Callable, Optional, Union

import numpy as np

from src.lindblad import LindbladianSpec, apply_channel, apply_channel_with_reference, exact_channel
from src.metrics import (
    IdentityReport,
    check_first_order_taylor,
    check_lemma1,
    check_mdagm_closed_form,
    check_phi_invariance,
    check_swap_identity,
    run_convergence_sweep,
    t_squared_scaling_check,
)
from src.numerics import DensityMatrix, trace_distance
from src.program import encode_lindblad, rescale_task
from src.shared.config import get_config
from src.shared.exceptions import ConfigurationException, SerializationException, TemplateException, WMLException
from src.shared.logs.logger import logger
from src.shared.serialization import format_float, write_csv, write_json
from src.shared.template_helper import TemplateRenderer, build_environment
from src.wml import DilationConfig, wml_simulate, wml_simulate_with_h

from .config import RunConfig, build_run_config, require_dim_within_caps
from .io import load_density, load_lindblad, load_matrix, load_phi

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_CONFIG = 2
EXIT_IO = 3

SWEEP_HEADER = ["n", "delta", "trial", "distance"]
VERIFY_TEMPLATE = "verify_report.md.j2"

DISTANCE_NOTE = (
    "Channel distances are trace distances of outputs, of Choi states, or sampled lower bounds "
    "on the diamond distance; the diamond norm itself is not computed."
)


def exit_code_for(error: BaseException) -> int:
    """Exit code of an exception: 3 for I/O and rendering failures, 2 for anything else."""
    if isinstance(error, (SerializationException, TemplateException, OSError)):
        return EXIT_IO
    return EXIT_INVALID_CONFIG


def fit_path_for(out: Path) -> Path:
    """``sweep.csv`` -> ``sweep.fit.json``."""
    return out.with_name(f"{out.stem}.fit.json")


def summary_path_for(out: Path) -> Path:
    """``verify_report.json`` -> ``verify_report.md``."""
    return out.with_suffix(".md")


def _report_row(report: IdentityReport) -> dict[str, Any]:
    return {
        "name": report.name,
        "trials": report.trials,
        "max_residual": f"{report.max_residual:.3e}",
        "tol": f"{report.tol:.1e}",
        "passed": report.passed,
    }


def write_verify_summary(path: Path, config: RunConfig, reports: list[IdentityReport]) -> Path:
    """Render the markdown companion of a verification report."""
    passed = [r for r in reports if r.passed]
    data = {
        "dim": config.dim,
        "seed": config.seed,
        "trials": config.trials,
        "tol": format_float(config.tol),
        "reports": [_report_row(r) for r in reports],
        "passed": len(passed) == len(reports),
        "passed_count": len(passed),
        "failed": [r.name for r in reports if not r.passed],
    }
    return TemplateRenderer(build_environment()).render_template(VERIFY_TEMPLATE, data, path)


def cmd_verify(config: RunConfig) -> int:
    """Run every identity suite and write the JSON report and its markdown summary."""
    d = config.dim
    logger.start(f"Verifying WML identities: d={d} trials={config.trials} seed={config.seed} tol={config.tol:.1e}")
    reports: list[IdentityReport] = []
    reports += check_lemma1(d, config.trials, config.seed, config.tol)
    reports.append(check_mdagm_closed_form(d, config.tol))
    reports.append(check_swap_identity(d, config.trials, config.seed, config.tol))
    reports += check_phi_invariance(d, get_config().verify.phi_trials, config.seed, config.tol)
    reports.append(check_first_order_taylor(d, config.seed))

    passed = all(r.passed for r in reports)
    write_json(
        config.out,
        {
            "dim": d,
            "seed": config.seed,
            "trials": config.trials,
            "tol": config.tol,
            "pass": passed,
            "reports": [r.to_json() for r in reports],
            "note": DISTANCE_NOTE,
        },
    )
    write_verify_summary(summary_path_for(config.out), config, reports)
    logger.end(f"{sum(r.passed for r in reports)}/{len(reports)} identities passed; report at {config.out}")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def _require_input(value: Optional[Path], flag: str, subcommand: str) -> Path:
    if value is None:
        raise ConfigurationException(
            f"{subcommand} needs {flag}",
            code="CLI005",
            context={"flag": flag},
        )
    return value


def _exact_final(spec: LindbladianSpec, t: float, rho: DensityMatrix, with_reference: bool) -> DensityMatrix:
    channel = exact_channel(spec, t)
    if with_reference:
        return apply_channel_with_reference(channel, rho)
    return apply_channel(channel, rho)


def cmd_simulate(config: RunConfig) -> int:
    """Run algorithm 1 or 2 on the given operator and state and write the SimulationResult JSON."""
    l, h = load_lindblad(_require_input(config.lindblad, "--lindblad", "simulate"))
    if config.hamiltonian is not None:
        h = load_matrix(config.hamiltonian)
    if config.algorithm == 2 and h is None:
        raise ConfigurationException(
            "Algorithm 2 needs a Hamiltonian: pass --hamiltonian or a Lindbladian file with one",
            code="CLI006",
        )
    if config.algorithm == 1 and h is not None:
        logger.warn("Algorithm 1 ignores the Hamiltonian; use --algorithm 2 to simulate it")
        h = None
    rho = load_density(_require_input(config.rho, "--rho", "simulate"))
    phi = load_phi(config.phi) if config.phi is not None else None

    d = require_dim_within_caps(int(l.shape[0]), config.with_reference)
    dilation = DilationConfig(d, with_reference=config.with_reference, phi=phi)
    if rho.dim != dilation.system_dim:
        raise ConfigurationException(
            f"State has dimension {rho.dim}, expected {dilation.system_dim}"
            f"{' (reference and system)' if config.with_reference else ''}",
            code="CLI007",
            context={"state_dim": rho.dim, "expected": dilation.system_dim},
        )

    t = config.time
    extras: dict[str, Any] = {}
    if config.auto_rescale:
        task = rescale_task(l, t)
        l, t = task.normalized_op, task.rescaled_time
        h = None if h is None else task.rescale_hamiltonian(h)
        logger.info(f"Rescaled ||L'||_2^2 = {task.original_norm_sq:.6g}; simulating t' = {t:.6g}")
        extras["rescale"] = task.to_json()

    if config.algorithm == 1:
        result = wml_simulate(l, rho, t, config.steps, dilation)
    else:
        result = wml_simulate_with_h(h, l, rho, t, config.steps, dilation)

    payload = result.to_json()
    payload.update(extras)
    if config.compare_exact:
        exact = _exact_final(LindbladianSpec.single(l, hamiltonian=h), t, rho, config.with_reference)
        distance = trace_distance(result.final_state, exact)
        logger.info(f"Trace distance to exact evolution: {distance:.6e}")
        payload["exact_distance"] = distance
        payload["note"] = DISTANCE_NOTE
    write_json(config.out, payload)
    logger.success(f"Wrote {config.out}")
    return EXIT_OK


def _amplitude_damping(d: int) -> np.ndarray:
    l = np.zeros((d, d), dtype=complex)
    l[0, 1] = 1.0
    return l


def _require_fixed_ratio_options(config: RunConfig, h: Optional[np.ndarray]) -> None:
    unsupported = []
    if config.algorithm == 2:
        unsupported.append("--algorithm 2")
    if h is not None:
        unsupported.append("a Hamiltonian")
    if config.with_reference:
        unsupported.append("--with-reference")
    if unsupported:
        raise ConfigurationException(
            f"--fixed-ratio runs algorithm 1 without a reference register; drop {', '.join(unsupported)}",
            code="CLI008",
            context={"unsupported": unsupported},
        )


def _fixed_ratio_sweep(config: RunConfig, l: Optional[np.ndarray], times: list[float]) -> int:
    l = _amplitude_damping(config.dim) if l is None else l
    report = t_squared_scaling_check(l, config.fixed_ratio, times, config.trials, config.seed)
    write_csv(config.out, SWEEP_HEADER, [row.to_csv() for row in report.rows])
    write_json(
        fit_path_for(config.out),
        {"mode": "fixed_ratio", "seed": config.seed, "trials": config.trials, **report.to_json()},
    )
    if report.passed:
        logger.success(f"Errors at fixed t^2/n stay within factor {report.factor:g} (max/min {report.spread:.3f})")
        return EXIT_OK
    logger.error(f"Errors at fixed t^2/n spread by {report.spread:.3f}, above factor {report.factor:g}")
    return EXIT_CHECK_FAILED


def cmd_sweep(config: RunConfig) -> int:
    """Run a convergence sweep and write the per-trial CSV and the fit JSON."""
    l, h = load_lindblad(config.lindblad) if config.lindblad is not None else (None, None)
    if config.hamiltonian is not None:
        h = load_matrix(config.hamiltonian)
    d = config.dim if l is None else require_dim_within_caps(int(l.shape[0]), config.with_reference)

    if config.fixed_ratio is not None:
        _require_fixed_ratio_options(config, h)

    t = config.time
    times = list(config.time_list)
    if l is not None and config.auto_rescale:
        task = rescale_task(l, t)
        l, t = task.normalized_op, task.rescaled_time
        h = None if h is None else task.rescale_hamiltonian(h)
        times = [task.original_norm_sq * s for s in times]
        logger.info(f"Rescaled ||L'||_2^2 = {task.original_norm_sq:.6g}; sweeping t' = {t:.6g}")
    if l is not None:
        encode_lindblad(l)

    if config.fixed_ratio is not None:
        return _fixed_ratio_sweep(config, l, times)

    result = run_convergence_sweep(
        d,
        t,
        config.steps_list,
        config.trials,
        config.seed,
        l=l,
        algorithm=config.algorithm,
        h=h,
        with_reference=config.with_reference,
    )
    sweep_cfg = get_config().sweep
    passed = result.curve.slope_within(sweep_cfg.slope_target, sweep_cfg.slope_band)
    write_csv(config.out, SWEEP_HEADER, [row.to_csv() for row in result.rows])
    write_json(
        fit_path_for(config.out),
        {
            "mode": "fixed_time",
            "dim": d,
            "time": t,
            "algorithm": config.algorithm,
            "with_reference": config.with_reference,
            "seed": config.seed,
            "trials": config.trials,
            **result.curve.to_json(),
            "slope_target": sweep_cfg.slope_target,
            "slope_band": sweep_cfg.slope_band,
            "pass": passed,
            "note": DISTANCE_NOTE,
        },
    )
    message = f"Fitted slope {result.curve.fitted_slope:.4f} (target {sweep_cfg.slope_target:g} +/- {sweep_cfg.slope_band:g})"
    if passed:
        logger.success(message)
        return EXIT_OK
    logger.error(message)
    return EXIT_CHECK_FAILED


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
}


def run_command(
    subcommand: str,
    options: Optional[dict[str, Any]] = None,
    run_file: Optional[Union[str, Path]] = None,
) -> int:
    """Validate options, run a command and map failures to exit codes.

    Args:
        subcommand: "verify", "simulate" or "sweep"
        options: Explicit options, keyed by RunConfig field name
        run_file: Optional YAML run file supplying defaults

    Returns:
        0 pass, 1 check failed, 2 invalid configuration, 3 I/O failure
    """
    try:
        config = build_run_config(subcommand, options, run_file)
        return COMMANDS[config.subcommand](config)
    except (WMLException, OSError) as e:
        logger.error(str(e))
        return exit_code_for(e)
