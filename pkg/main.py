import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from src.cli import run_command
from src.shared.config import get_config
from src.shared.logs.logger import logger


def _common_options() -> argparse.ArgumentParser:
    # SUPPRESS keeps unset flags out of the namespace so run-file values are not overridden
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", dest="run_file", help="YAML run file with default options")
    common.add_argument("-v", "--verbose", action="store_true", help="Show debug output, per-step drift included")
    common.add_argument("--dim", type=int, help="Local dimension d (default: 2)")
    common.add_argument("--seed", type=int, help="Base seed; trial i uses seed + i (default: 42)")
    common.add_argument("--trials", type=int, help="Random trials per check or per step count")
    common.add_argument("--algorithm", type=int, choices=[1, 2], help="1: Lindblad operator only, 2: with Hamiltonian")
    common.add_argument("--with-reference", action="store_true", help="Act on a reference register R of dimension d")
    common.add_argument("--phi", type=Path, help="State-vector JSON replacing the maximally entangled vector in M")
    common.add_argument("--lindblad", type=Path, help="Matrix JSON or Lindbladian JSON with one Lindblad operator")
    common.add_argument("--hamiltonian", type=Path, help="Matrix JSON of the Hamiltonian (algorithm 2)")
    common.add_argument("--auto-rescale", action="store_true", help="Normalize L and stretch the time to ||L||_2^2 t")
    common.add_argument("--out", type=Path, help="Output path")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Simulate Lindblad evolution by wave matrix Lindbladization and verify its identities"
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    common = _common_options()

    verify = subparsers.add_parser(
        "verify", parents=[common], argument_default=argparse.SUPPRESS, help="Check the operator identities behind WML"
    )
    verify.add_argument("--tol", type=float, help="Residual tolerance (default: 1e-10)")

    simulate = subparsers.add_parser(
        "simulate", parents=[common], argument_default=argparse.SUPPRESS, help="Run one WML simulation"
    )
    simulate.add_argument("--rho", type=Path, help="Matrix JSON of the initial state")
    simulate.add_argument("--time", type=float, help="Evolution time t")
    simulate.add_argument("--steps", type=int, help="Number of steps and program copies n")
    simulate.add_argument("--compare-exact", action="store_true", help="Report the trace distance to exp(Lt)")

    sweep = subparsers.add_parser(
        "sweep", parents=[common], argument_default=argparse.SUPPRESS, help="Fit error against the number of copies"
    )
    sweep.add_argument("--time", type=float, help="Evolution time t")
    sweep.add_argument("--steps-list", type=int, nargs="+", help="Strictly increasing step counts (at least 3)")
    sweep.add_argument(
        "--fixed-ratio",
        type=float,
        nargs="?",
        const=get_config().sweep.fixed_ratio,
        help="Hold t^2/n fixed and check the errors stay flat (bare flag: SWEEP_FIXED_RATIO, default 1e-3)",
    )
    sweep.add_argument("--time-list", type=float, nargs="+", help="Times used with --fixed-ratio")
    return parser


def main(argv=None) -> int:
    options = vars(build_parser().parse_args(argv))
    subcommand = options.pop("subcommand")
    run_file = options.pop("run_file", None)
    verbose = options.pop("verbose", False)

    log_cfg = get_config().log
    logger.configure(log_cfg.level, log_cfg.verbose or verbose, log_cfg.show_timestamps)
    return run_command(subcommand, options, run_file)


if __name__ == "__main__":
    sys.exit(main())
