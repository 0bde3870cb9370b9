"""
Entropy production, entropy flux and correlations of Gaussian states
"""
from __future__ import annotations

import math
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from magnotherm.exceptions import DomainError
from magnotherm.model import SystemParams


class Scope(str, Enum):
    THREE_MODE = "three_mode"
    MAGNON_PHONON = "magnon_phonon"


class DriftSplit(NamedTuple):
    a_irr: np.ndarray
    a_rev: np.ndarray


def time_reversal_parity(n_modes: int) -> np.ndarray:
    """Diagonal of E: +1 on x quadratures, -1 on y quadratures"""
    return np.tile([1.0, -1.0], n_modes)


def time_reversal_split(A: np.ndarray) -> DriftSplit:
    """
    Split A into the part even under E = diag(1, -1, ...) (dissipative)
    and the odd part (Hamiltonian flow).
    """
    A = np.asarray(A, dtype=float)
    e = time_reversal_parity(A.shape[0] // 2)
    mirrored = np.outer(e, e) * A
    return DriftSplit(a_irr=(A + mirrored) / 2, a_rev=(A - mirrored) / 2)


def irreversible_offdiagonal(split: DriftSplit) -> float:
    off = split.a_irr - np.diag(np.diag(split.a_irr))
    return float(np.abs(off).max())


def _factor(V: np.ndarray):
    try:
        return cho_factor(V)
    except LinAlgError:
        raise DomainError("Covariance matrix is not positive definite")


def _inverse_diffusion(D: np.ndarray) -> np.ndarray:
    D = np.asarray(D, dtype=float)
    if np.any(D != np.diag(np.diag(D))):
        try:
            return cho_solve(cho_factor(D), np.eye(D.shape[0]))
        except LinAlgError:
            raise DomainError("Diffusion matrix is singular")
    diagonal = np.diag(D)
    if np.any(diagonal <= 0):
        raise DomainError("Diffusion matrix is singular (a bath coupling is zero)")
    return np.diag(1.0 / diagonal)


def mode_entropy_production(V: np.ndarray, params: SystemParams) -> np.ndarray:
    """Stationary entropy production per mode (photon, magnon, phonon)"""
    V = np.asarray(V, dtype=float)
    variances = np.diag(V)[0::2] + np.diag(V)[1::2]
    gammas = np.array(params.gammas)
    occupations = np.array(params.occupations)
    return 2 * gammas * (variances / (2 * occupations + 1) - 1)


def entropy_production_stationary(
    V: np.ndarray, params: SystemParams, scope: Scope = Scope.THREE_MODE
) -> float:
    terms = mode_entropy_production(V, params)
    if Scope(scope) == Scope.MAGNON_PHONON:
        return float(terms[1] + terms[2])
    return float(terms.sum())


def entropy_production_trace(V: np.ndarray, split: DriftSplit, D: np.ndarray) -> float:
    """
    Entropy production rate of a Gaussian state with covariance V:
    1/2 tr(V^-1 D) + 2 tr(A_irr) + 2 tr(A_irr^T D^-1 A_irr V)
    """
    V = np.asarray(V, dtype=float)
    D = np.asarray(D, dtype=float)
    a_irr = split.a_irr
    D_inv = _inverse_diffusion(D)
    V_inv_D = cho_solve(_factor(V), D)
    return float(
        np.trace(V_inv_D) / 2
        + 2 * np.trace(a_irr)
        + 2 * np.trace(a_irr.T @ D_inv @ a_irr @ V)
    )


def entropy_production_reduced(V: np.ndarray, split: DriftSplit, D: np.ndarray) -> float:
    """
    The trace formula after eliminating tr(V^-1 D) with the stationarity
    condition; only valid at a steady state.
    """
    a_irr = split.a_irr
    D_inv = _inverse_diffusion(D)
    return float(np.trace(2 * a_irr.T @ D_inv @ a_irr @ np.asarray(V) + a_irr))


def entropy_flux(pi: float, ds_dt: float) -> float:
    """Entropy flow to the reservoirs from the balance dS/dt = Pi - Phi"""
    return pi - ds_dt


def wigner_entropy(V: np.ndarray) -> float:
    """Shannon entropy of the Gaussian Wigner function with covariance V"""
    V = np.asarray(V, dtype=float)
    sign, logdet = np.linalg.slogdet(V)
    if sign <= 0:
        raise DomainError("Covariance matrix is not positive definite")
    return float(logdet / 2 + V.shape[0] / 2 * math.log(2 * math.pi * math.e))


def wigner_entropy_rate(V: np.ndarray, V_dot: np.ndarray) -> float:
    return float(np.trace(cho_solve(_factor(np.asarray(V, dtype=float)), V_dot)) / 2)


def mode_indices(*modes: int) -> list[int]:
    return [q for mode in modes for q in (2 * mode, 2 * mode + 1)]


def mutual_information(V: np.ndarray, first: int = 1, second: int = 2) -> float:
    """
    Mutual information [nats] between two modes (default: magnon and phonon)
    """
    if first == second:
        raise DomainError("Mutual information needs two distinct modes")
    V = np.asarray(V, dtype=float)

    def logdet(indices: list[int]) -> float:
        sign, value = np.linalg.slogdet(V[np.ix_(indices, indices)])
        if sign <= 0:
            raise DomainError(f"Non-positive determinant of block {indices}")
        return value

    joint = logdet(mode_indices(first, second))
    return float(
        (logdet(mode_indices(first)) + logdet(mode_indices(second)) - joint) / 2
    )


def weak_coupling_estimate(pi: float, gamma_tot: float) -> float:
    """Mutual information predicted from the entropy production at weak coupling"""
    return pi / (2 * gamma_tot)


def weak_coupling_ratio(mutual_info: float, estimate: float) -> float:
    """Mutual information over its weak-coupling estimate; nan if the estimate vanishes"""
    if abs(estimate) < 1e-12:
        return math.nan
    return mutual_info / estimate
