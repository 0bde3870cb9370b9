"""
Time integration of the covariance moment equation dV/dt = A V + V A^T + D,
used as an independent check of the Lyapunov solver and for entropy budgets
along relaxation trajectories.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from magnotherm import thermo
from magnotherm.exceptions import (
    DomainError,
    IntegrationDivergedError,
    NonConvergenceError,
    ParameterError,
)
from magnotherm.smallmat import spectral_abscissa

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrajectoryPoint:
    time: float
    V: np.ndarray
    entropy: float
    pi: float
    phi: float
    ds_dt: float


def covariance_rhs(A: np.ndarray, D: np.ndarray, V: np.ndarray) -> np.ndarray:
    rate = A @ V + V @ A.T + D
    return (rate + rate.T) / 2


def max_step(A: np.ndarray, omega_b: float = 1.0) -> float:
    """Largest step allowed for the fixed-step integrator"""
    return 0.1 / max(float(np.abs(A).max()), omega_b)


def rk4_step(A: np.ndarray, D: np.ndarray, V: np.ndarray, dt: float) -> np.ndarray:
    k1 = covariance_rhs(A, D, V)
    k2 = covariance_rhs(A, D, V + dt / 2 * k1)
    k3 = covariance_rhs(A, D, V + dt / 2 * k2)
    k4 = covariance_rhs(A, D, V + dt * k3)
    V = V + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return (V + V.T) / 2


def rk4_propagator(
    A: np.ndarray, D: np.ndarray, dt: float
) -> tuple[np.ndarray, np.ndarray]:
    """
    One RK4 step written as the affine map vec(V) -> M vec(V) + c
    (column-major vec). For a linear right-hand side this is the same
    arithmetic as `rk4_step`, up to rounding.
    """
    n = A.shape[0]
    identity = np.eye(n * n)
    L = np.kron(np.eye(n), A) + np.kron(A, np.eye(n))
    hL = dt * L
    P = identity + hL @ (identity / 2 + hL @ (identity / 6 + hL / 24))
    M = identity + P @ hL
    c = dt * P @ np.asarray(D, dtype=float).reshape(-1, order="F")
    return M, c


def _trajectory_point(
    time: float, A: np.ndarray, D: np.ndarray, V: np.ndarray, split: thermo.DriftSplit
) -> TrajectoryPoint:
    if not np.all(np.isfinite(V)):
        raise IntegrationDivergedError(f"Covariance became non-finite at t={time:g}")
    try:
        entropy = thermo.wigner_entropy(V)
        ds_dt = thermo.wigner_entropy_rate(V, covariance_rhs(A, D, V))
    except DomainError:
        raise IntegrationDivergedError(
            f"Covariance lost positive definiteness at t={time:g}"
        )
    pi = thermo.entropy_production_trace(V, split, D)
    return TrajectoryPoint(
        time=time,
        V=V,
        entropy=entropy,
        pi=pi,
        phi=thermo.entropy_flux(pi, ds_dt),
        ds_dt=ds_dt,
    )


def integrate_covariance(
    A: np.ndarray,
    D: np.ndarray,
    V0: np.ndarray,
    dt: float,
    t_end: float,
    stride: int = 1,
) -> list[TrajectoryPoint]:
    """
    Classic fixed-step RK4 from V0 up to t_end (rounded up to whole steps).
    Every `stride`-th state and the final state are returned with their
    entropy budget.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    if not dt > 0:
        raise ParameterError(f"dt must be > 0, got {dt}")
    if dt > max_step(A) * (1 + 1e-12):
        raise ParameterError(f"dt={dt:g} exceeds the stable step {max_step(A):g}")
    if t_end < 0:
        raise ParameterError(f"t_end must be >= 0, got {t_end}")

    split = thermo.time_reversal_split(A)
    n_steps = math.ceil(t_end / dt - 1e-9)
    V = (np.asarray(V0, dtype=float) + np.asarray(V0, dtype=float).T) / 2
    points = [_trajectory_point(0.0, A, D, V, split)]
    for step in range(1, n_steps + 1):
        V = rk4_step(A, D, V, dt)
        if step % stride == 0 or step == n_steps:
            points.append(_trajectory_point(step * dt, A, D, V, split))
    return points


def steady_state_by_integration(
    A: np.ndarray,
    D: np.ndarray,
    tol: float = 1e-10,
    dt: Optional[float] = None,
    max_steps: int = 4_000_000,
    block: int = 64,
    patience: int = 16,
) -> np.ndarray:
    """
    Relax from the vacuum I/2 until the distance to the stationary covariance
    is below `tol` entry-wise. Steps are applied `block` at a time through the
    composed RK4 map.

    The slowest error mode decays at twice the spectral abscissa, so the
    distance is estimated as max|dV/dt| / (2 |abscissa|). Once max|dV/dt| is
    below tol * max|D| and has not improved for `patience` blocks, the
    iteration sits at its rounding floor and the current state is returned.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    n = A.shape[0]
    if dt is None:
        dt = max_step(A)
    abscissa = spectral_abscissa(A)
    threshold = tol * float(np.abs(D).max())
    target = threshold
    if abscissa < 0:
        target = min(threshold, 2 * tol * abs(abscissa))

    M, c = rk4_propagator(A, D, dt)
    # Compose increments N = M - I to keep the update well conditioned:
    # N_2k = N_k^2 + 2 N_k, c_2k = N_k c_k + 2 c_k
    N = M - np.eye(n * n)
    doublings = int(math.log2(block))
    for _ in range(doublings):
        N, c = N @ N + 2 * N, N @ c + 2 * c
    steps_per_block = 2**doublings

    V = np.eye(n) / 2
    steps = 0
    best = math.inf
    stalled = 0
    while steps < max_steps:
        x = V.reshape(-1, order="F")
        x = x + (N @ x + c)
        V = x.reshape((n, n), order="F")
        V = (V + V.T) / 2
        steps += steps_per_block
        if not np.all(np.isfinite(V)) or np.abs(V).max() > 1e150:
            break
        rate = float(np.abs(covariance_rhs(A, D, V)).max())
        if rate < target:
            logger.debug("Covariance converged after %d steps (t=%g)", steps, steps * dt)
            return V
        if rate < threshold:
            if rate < best:
                best, stalled = rate, 0
            else:
                stalled += 1
            if stalled >= patience:
                logger.debug(
                    "Covariance reached its rounding floor (max|dV/dt| %.3g) after %d steps",
                    best,
                    steps,
                )
                return V

    raise NonConvergenceError(
        "Covariance integration did not reach a steady state",
        spectral_abscissa=abscissa,
        steps=steps,
    )
