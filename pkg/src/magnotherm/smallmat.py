"""
Dense kernels for the fixed-size (6x6) matrices of the three-mode model
"""
from __future__ import annotations

from typing import Literal, NamedTuple

import numpy as np
from scipy.linalg import LinAlgError, cholesky, eigvals, eigvalsh, lu_factor, lu_solve

from magnotherm.exceptions import (
    DomainError,
    InstabilityError,
    MarginalStabilityError,
    NumericError,
)

RouthVerdict = Literal["stable", "unstable", "marginal"]

# |spectral abscissa| below this is reported as marginal
MARGIN = 1e-9

RESIDUAL_TOLERANCE = 1e-10


class StabilityReport(NamedTuple):
    spectral_abscissa: float
    hurwitz_stable: bool
    char_poly_coeffs: np.ndarray
    verdict: RouthVerdict

    @property
    def marginal(self) -> bool:
        return abs(self.spectral_abscissa) <= MARGIN

    @property
    def stable(self) -> bool:
        return self.spectral_abscissa < -MARGIN and self.hurwitz_stable


def symplectic_form(n: int) -> np.ndarray:
    """Omega for n modes in (x_1, y_1, ..., x_n, y_n) ordering"""
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def spectral_abscissa(A: np.ndarray) -> float:
    """Largest real part of the eigenvalues of A"""
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise DomainError("Matrix has non-finite entries")
    try:
        eigenvalues = eigvals(A)
    except LinAlgError as e:
        raise NumericError(
            f"Eigenvalue iteration did not converge for a {A.shape[0]}x{A.shape[1]} "
            f"matrix with norm {np.abs(A).max():g}: {e}"
        )
    return float(np.max(eigenvalues.real))


def char_poly(A: np.ndarray) -> np.ndarray:
    """
    Coefficients c_0, ..., c_n (ascending powers) of det(lambda I - A), from
    the Faddeev-LeVerrier recursion.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    M = np.zeros_like(A)
    identity = np.eye(n)
    for k in range(1, n + 1):
        M = A @ M + coeffs[n - k + 1] * identity
        coeffs[n - k] = -np.trace(A @ M) / k
    return coeffs


def roots_abscissa(coeffs: np.ndarray) -> float:
    """Largest real part of the polynomial roots; `coeffs` in ascending powers"""
    roots = np.roots(np.asarray(coeffs, dtype=float)[::-1])
    return float(np.max(roots.real))


def routh_first_column(coeffs: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """
    First column of the Routh array. The array stops at the first pivot that
    vanishes relative to its neighbours; the returned column then ends in 0.
    """
    a = np.asarray(coeffs, dtype=float)[::-1]
    if a[0] == 0:
        raise DomainError("Leading coefficient must be non-zero")
    a = a / a[0]
    n = len(a) - 1
    width = n // 2 + 1
    rows = np.zeros((n + 1, width + 1))
    rows[0, : len(a[0::2])] = a[0::2]
    rows[1, : len(a[1::2])] = a[1::2]

    column = [rows[0, 0]]
    for i in range(1, n + 1):
        if i >= 2:
            pivot = rows[i - 1, 0]
            rows[i, :-1] = (
                pivot * rows[i - 2, 1:] - rows[i - 2, 0] * rows[i - 1, 1:]
            ) / pivot
        scale = max(np.abs(rows[i]).max(), np.abs(rows[i - 1]).max(), 1e-300)
        if abs(rows[i, 0]) <= rtol * scale:
            column.append(0.0)
            break
        column.append(rows[i, 0])
    return np.array(column)


def routh_hurwitz(coeffs: np.ndarray) -> RouthVerdict:
    column = routh_first_column(coeffs)
    if np.any(column < 0):
        return "unstable"
    if np.any(column == 0):
        return "marginal"
    return "stable"


def routh_hurwitz_stable(coeffs: np.ndarray) -> bool:
    return routh_hurwitz(coeffs) == "stable"


def hurwitz_matrix(coeffs: np.ndarray) -> np.ndarray:
    a = np.asarray(coeffs, dtype=float)[::-1]
    n = len(a) - 1
    H = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            k = 2 * i - j + 1
            if 0 <= k <= n:
                H[i, j] = a[k]
    return H


def stability(A: np.ndarray) -> StabilityReport:
    coeffs = char_poly(A)
    verdict = routh_hurwitz(coeffs)
    return StabilityReport(
        spectral_abscissa=spectral_abscissa(A),
        hurwitz_stable=verdict == "stable",
        char_poly_coeffs=coeffs,
        verdict=verdict,
    )


def lyapunov_residual(A: np.ndarray, D: np.ndarray, V: np.ndarray) -> float:
    return float(np.abs(A @ V + V @ A.T + D).max())


def lyapunov_solve(A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """
    Stationary covariance: the symmetric V with A V + V A^T + D = 0, from the
    Kronecker-vectorized (n^2 x n^2) system and a dense LU factorization.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or D.shape != (n, n):
        raise DomainError(f"Shape mismatch: A {A.shape}, D {D.shape}")
    if np.any(D != np.diag(np.diag(D))) or np.any(np.diag(D) < 0):
        raise DomainError("D must be diagonal with non-negative entries")

    abscissa = spectral_abscissa(A)
    if abs(abscissa) <= MARGIN:
        raise MarginalStabilityError("Drift matrix is marginally stable", abscissa)
    if abscissa > 0:
        raise InstabilityError("Drift matrix is unstable", abscissa)

    identity = np.eye(n)
    kron = np.kron(identity, A) + np.kron(A, identity)
    try:
        lu = lu_factor(kron, check_finite=False)
    except LinAlgError:
        raise MarginalStabilityError("Singular Lyapunov operator", abscissa)

    def solve(rhs: np.ndarray) -> np.ndarray:
        x = lu_solve(lu, -rhs.reshape(-1, order="F"), check_finite=False)
        x = x.reshape((n, n), order="F")
        return (x + x.T) / 2

    V = solve(D)
    tolerance = RESIDUAL_TOLERANCE * max(1.0, np.abs(D).max())
    for _ in range(2):
        residual = A @ V + V @ A.T + D
        if np.abs(residual).max() <= tolerance:
            break
        V = V + solve(residual)
    return V


def symplectic_eigenvalues(V: np.ndarray) -> tuple[float, ...]:
    """Symplectic spectrum of a covariance matrix, in descending order"""
    V = np.asarray(V, dtype=float)
    n = V.shape[0] // 2
    if not np.allclose(V, V.T, rtol=0, atol=1e-12 * max(1.0, np.abs(V).max())):
        raise DomainError("Covariance matrix is not symmetric")
    try:
        L = cholesky((V + V.T) / 2, lower=True)
    except LinAlgError:
        raise DomainError("Covariance matrix is not positive definite")
    hermitian = 1j * (L.T @ symplectic_form(n) @ L)
    values = eigvalsh(hermitian)
    return tuple(float(v) for v in values[n:][::-1])
