"""Verification suites for the exact operator identities behind WML.

Every suite draws its random inputs from seed ``seed + i`` for trial ``i`` and reports the
largest Schatten-2 residual between the two sides of the identity.
"""

from typing import Optional

import numpy as np
from scipy.stats import linregress

from src.lindblad import LindbladianSpec, apply_lindbladian, exact_channel
from src.numerics import (
    DensityMatrix,
    RegisterLayout,
    commutator,
    dagger,
    kron,
    partial_trace,
    random_density_matrix,
    random_hermitian,
    random_pure_state,
    random_unit_hs_operator,
    schatten_norm,
    swap_matrix,
    unvec,
    vec,
)
from src.numerics.sampling import STREAM_PURE
from src.program import encode_lindblad
from src.shared.config import get_config
from src.shared.exceptions import VerificationException
from src.shared.logs.logger import logger
from src.wml import DilationConfig, build_m, mdagm_closed_form
from src.wml.types import PROGRAM_P, PROGRAM_Q

from .types import IdentityReport

DEFAULT_TAYLOR_DELTAS = tuple(2.0**-k for k in range(3, 11))


def _require_dim(d: int) -> None:
    if d < 2:
        raise VerificationException(
            f"Verification suites need d >= 2, got {d}",
            code="MET001",
            context={"d": d},
        )


def _trace_program(x: np.ndarray, d: int) -> np.ndarray:
    return partial_trace(x, RegisterLayout((d, d, d), ("S", PROGRAM_P, PROGRAM_Q)), [PROGRAM_P, PROGRAM_Q])


def lemma1_residuals(l: np.ndarray, rho: DensityMatrix, config: Optional[DilationConfig] = None) -> tuple[float, float, float]:
    """Residuals of the three partial-trace identities of M for one (L, rho).

    The identities are ``Tr_PQ[M (rho (x) psi) M^dagger] = L rho L^dagger``,
    ``Tr_PQ[M^dagger M (rho (x) psi)] = L^dagger L rho`` and
    ``Tr_PQ[(rho (x) psi) M^dagger M] = rho L^dagger L``.
    """
    d = rho.dim
    config = config or DilationConfig(d)
    m = build_m(config)
    mdagm = dagger(m) @ m
    joint = kron(rho.mat, encode_lindblad(l).density())
    l = np.asarray(l, dtype=complex)
    ldl = dagger(l) @ l
    return (
        schatten_norm(_trace_program(m @ joint @ dagger(m), d) - l @ rho.mat @ dagger(l), 2),
        schatten_norm(_trace_program(mdagm @ joint, d) - ldl @ rho.mat, 2),
        schatten_norm(_trace_program(joint @ mdagm, d) - rho.mat @ ldl, 2),
    )


def check_lemma1(d: int, trials: int, seed: int, tol: float) -> tuple[IdentityReport, IdentityReport, IdentityReport]:
    """Check the three partial-trace identities of M on random (L, rho).

    Args:
        d: Local dimension, at least 2
        trials: Number of random pairs
        seed: Base seed; trial i uses seed + i
        tol: Residual tolerance

    Returns:
        Reports for the jump term, the left anticommutator term and the right one
    """
    _require_dim(d)
    worst = [0.0, 0.0, 0.0]
    config = DilationConfig(d)
    for i in range(trials):
        l = random_unit_hs_operator(d, seed + i)
        rho = random_density_matrix(d, seed + i)
        worst = [max(w, r) for w, r in zip(worst, lemma1_residuals(l, rho, config))]
    names = ("lemma1_jump", "lemma1_left", "lemma1_right")
    reports = tuple(IdentityReport(name, trials, res, tol) for name, res in zip(names, worst))
    for report in reports:
        _log_report(report)
    return reports


def check_mdagm_closed_form(d: int, tol: Optional[float] = None) -> IdentityReport:
    """Compare ``M^dagger M`` with its index-sum closed form and its spectrum.

    The spectrum must be ``d`` with multiplicity ``d`` and 0 elsewhere. The reported
    residual is the larger of the Schatten-2 matrix residual and the largest eigenvalue error.
    """
    _require_dim(d)
    tol = tol if tol is not None else get_config().verify.tol
    config = DilationConfig(d)
    m = build_m(config)
    mdagm = dagger(m) @ m
    matrix_residual = schatten_norm(mdagm - mdagm_closed_form(config), 2)

    eigenvalues = np.sort(np.linalg.eigvalsh(0.5 * (mdagm + dagger(mdagm))))
    expected = np.concatenate([np.zeros(d**3 - d), np.full(d, float(d))])
    spectrum_residual = float(np.max(np.abs(eigenvalues - expected)))

    report = IdentityReport("mdagm_closed_form", 1, max(matrix_residual, spectrum_residual), tol)
    _log_report(report)
    return report


def check_swap_identity(d: int, trials: int, seed: int, tol: float) -> IdentityReport:
    """Check ``Tr_2[-i[SWAP, rho (x) sigma]] = -i[sigma, rho]`` on random state pairs."""
    _require_dim(d)
    swap = swap_matrix(d)
    layout = RegisterLayout((d, d))
    worst = 0.0
    for i in range(trials):
        rho = random_density_matrix(d, seed + i).mat
        sigma = random_density_matrix(d, seed + i, stream=STREAM_PURE).mat
        lhs = partial_trace(-1j * commutator(swap, kron(rho, sigma)), layout, [1])
        worst = max(worst, schatten_norm(lhs + 1j * commutator(sigma, rho), 2))
    report = IdentityReport("swap_hamiltonian_term", trials, worst, tol)
    _log_report(report)
    return report


def check_phi_invariance(d: int, trials: int, seed: int, tol: float) -> tuple[IdentityReport, IdentityReport]:
    """Check that replacing ``Gamma / sqrt(d)`` by a random unit phi leaves two things unchanged.

    These are ``M^dagger M`` and the jump term ``Tr_PQ[M (rho (x) psi) M^dagger]``. The
    higher-order terms of the dilated evolution are not compared.
    """
    _require_dim(d)
    default = DilationConfig(d)
    m0 = build_m(default)
    mdagm0 = dagger(m0) @ m0
    l = random_unit_hs_operator(d, seed)
    rho = random_density_matrix(d, seed)
    joint = kron(rho.mat, encode_lindblad(l).density())
    jump0 = _trace_program(m0 @ joint @ dagger(m0), d)

    worst_mdagm = 0.0
    worst_jump = 0.0
    for i in range(trials):
        phi = random_pure_state(d * d, seed + i)
        m = build_m(DilationConfig(d, phi=phi))
        worst_mdagm = max(worst_mdagm, schatten_norm(dagger(m) @ m - mdagm0, 2))
        worst_jump = max(worst_jump, schatten_norm(_trace_program(m @ joint @ dagger(m), d) - jump0, 2))
    reports = (
        IdentityReport("phi_invariance_mdagm", trials, worst_mdagm, tol),
        IdentityReport("phi_invariance_first_order", trials, worst_jump, tol),
    )
    for report in reports:
        _log_report(report)
    return reports


def taylor_remainders(spec: LindbladianSpec, rho: DensityMatrix, deltas) -> list[float]:
    """Trace norms of ``exp(L delta)(rho) - rho - delta L(rho)`` for each delta."""
    generator = apply_lindbladian(spec, rho)
    out = []
    for delta in deltas:
        evolved = unvec(exact_channel(spec, delta).mat @ vec(rho.mat), spec.dim)
        out.append(schatten_norm(evolved - rho.mat - delta * generator, 1))
    return out


def check_first_order_taylor(
    d: int,
    seed: int,
    deltas=DEFAULT_TAYLOR_DELTAS,
    slope: Optional[float] = None,
    band: Optional[float] = None,
) -> IdentityReport:
    """Fit the log-log slope of the first-order Taylor remainder of the exact channel.

    The generator has a random Hamiltonian and a random unit-norm Lindblad operator. The
    report residual is ``|fitted slope - slope|`` compared against ``band``.
    """
    _require_dim(d)
    cfg = get_config().verify
    slope = cfg.taylor_slope if slope is None else slope
    band = cfg.taylor_band if band is None else band

    h = random_hermitian(d, seed)
    spec = LindbladianSpec.single(random_unit_hs_operator(d, seed), hamiltonian=h / schatten_norm(h, 2))
    rho = random_density_matrix(d, seed)
    remainders = taylor_remainders(spec, rho, deltas)
    fit = linregress(np.log(np.asarray(deltas)), np.log(np.asarray(remainders)))
    logger.debug(f"Taylor remainder slope {fit.slope:.4f}")

    report = IdentityReport("first_order_taylor", len(deltas), abs(float(fit.slope) - slope), band)
    _log_report(report)
    return report


def _log_report(report: IdentityReport) -> None:
    message = f"{report.name}: max residual {report.max_residual:.3e} over {report.trials} trials (tol {report.tol:.1e})"
    if report.passed:
        logger.success(message)
    else:
        logger.error(message)
