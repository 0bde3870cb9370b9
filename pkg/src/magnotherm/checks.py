"""
Invariant battery behind `magnotherm check`: every measure of one parameter
point is recomputed along an independent path and compared.
"""
from __future__ import annotations

import logging
import math
from typing import NamedTuple, Optional

import numpy as np

from magnotherm import dynamics, thermo
from magnotherm.exceptions import NonConvergenceError, NumericError
from magnotherm.model import DriftConvention, SystemParams, build_matrices
from magnotherm.smallmat import (
    RESIDUAL_TOLERANCE,
    lyapunov_residual,
    lyapunov_solve,
    roots_abscissa,
    stability,
    symplectic_eigenvalues,
)

logger = logging.getLogger(__name__)

# Relaxation runs longer than this are skipped by the budget check.
MAX_RELAXATION_STEPS = 500_000


class CheckResult(NamedTuple):
    name: str
    passed: Optional[bool]  # None: not applicable at this point
    detail: str

    @property
    def label(self) -> str:
        return {True: "PASS", False: "FAIL", None: "SKIP"}[self.passed]


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed is not False for r in results)


def run_checks(params: SystemParams, relaxation_periods: float = 30.0) -> list[CheckResult]:
    matrices = build_matrices(params)
    A, D = matrices.drift, matrices.diffusion
    verdict = stability(A)
    results = []

    abscissa = verdict.spectral_abscissa
    if abs(abscissa) <= 1e-6:
        results.append(
            CheckResult(
                "routh agrees with eigenvalues", None, f"abscissa {abscissa:.3g} too close to 0"
            )
        )
    else:
        agree = verdict.hurwitz_stable == (abscissa < 0)
        results.append(
            CheckResult(
                "routh agrees with eigenvalues",
                agree,
                f"routh {verdict.verdict}, abscissa {abscissa:.6g}",
            )
        )
    from_roots = roots_abscissa(verdict.char_poly_coeffs)
    results.append(
        CheckResult(
            "characteristic roots agree with eigenvalues",
            abs(from_roots - abscissa) <= 1e-5 * max(1.0, float(np.abs(A).max())),
            f"roots {from_roots:.6g}, eigenvalues {abscissa:.6g}",
        )
    )

    if not verdict.stable:
        try:
            dynamics.steady_state_by_integration(A, D, max_steps=20_000)
            results.append(CheckResult("ode oracle fails when unstable", False, "converged"))
        except NonConvergenceError as e:
            results.append(CheckResult("ode oracle fails when unstable", True, str(e)))
        _log(results)
        return results

    V = lyapunov_solve(A, D)
    residual = lyapunov_residual(A, D, V)
    tolerance = RESIDUAL_TOLERANCE * max(1.0, float(np.abs(D).max()))
    results.append(
        CheckResult("lyapunov residual", residual <= tolerance, f"{residual:.3g} <= {tolerance:.3g}")
    )

    try:
        V_ode = dynamics.steady_state_by_integration(A, D)
        deviation = float(np.abs(V_ode - V).max())
        bound = 1e-6 * max(1.0, float(np.abs(V).max()))
        results.append(
            CheckResult("ode oracle matches lyapunov", deviation <= bound, f"{deviation:.3g}")
        )
    except NumericError as e:
        results.append(CheckResult("ode oracle matches lyapunov", False, str(e)))

    split = thermo.time_reversal_split(A)
    pi_total = thermo.entropy_production_stationary(V, params)
    pi_trace = thermo.entropy_production_trace(V, split, D)
    if params.drift_convention == DriftConvention.CONSISTENT:
        difference = abs(pi_trace - pi_total)
        results.append(
            CheckResult(
                "trace formula matches mode sum",
                difference <= 1e-8 * max(1.0, pi_total),
                f"{pi_trace:.10g} vs {pi_total:.10g}",
            )
        )
    else:
        results.append(
            CheckResult(
                "trace formula matches mode sum",
                None,
                f"{params.drift_convention.value} drift, "
                f"off-diagonal A_irr {thermo.irreversible_offdiagonal(split):.3g}",
            )
        )

    nu = symplectic_eigenvalues(V)
    results.append(
        CheckResult("uncertainty principle", min(nu) >= 0.5 - 1e-9, f"min nu {min(nu):.10g}")
    )

    info = thermo.mutual_information(V)
    results.append(
        CheckResult(
            "non-negative entropy production and information",
            pi_total >= -1e-9 and info >= -1e-9,
            f"pi {pi_total:.6g}, I {info:.6g}",
        )
    )

    results.extend(_relaxation_checks(A, D, relaxation_periods / abs(abscissa)))
    _log(results)
    return results


def _relaxation_checks(A: np.ndarray, D: np.ndarray, t_end: float) -> list[CheckResult]:
    names = ("entropy production stays non-negative", "stationary entropy budget")
    dt = dynamics.max_step(A)
    if t_end / dt > MAX_RELAXATION_STEPS:
        return [CheckResult(name, None, f"relaxation time {t_end:.3g} too long") for name in names]

    n_steps = math.ceil(t_end / dt)
    trajectory = dynamics.integrate_covariance(
        A, D, np.eye(A.shape[0]) / 2, dt, t_end, stride=max(1, n_steps // 200)
    )
    lowest = min(p.pi for p in trajectory)
    final = trajectory[-1]
    gap = abs(final.phi - final.pi)
    return [
        CheckResult(names[0], lowest >= -1e-9, f"min pi(t) {lowest:.3g}"),
        CheckResult(
            names[1],
            gap <= 1e-6 * max(1.0, final.pi),
            f"|phi - pi| {gap:.3g} at t={final.time:.4g}",
        ),
    ]


def _log(results: list[CheckResult]):
    for r in results:
        logger.debug("%s %s: %s", r.label, r.name, r.detail)
