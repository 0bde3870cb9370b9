from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
from scipy import constants

from magnotherm.exceptions import DomainError, ParameterError, SingularityError

HBAR = constants.hbar  # 1.054571817e-34 J s
K_B = constants.k  # 1.380649e-23 J/K

GYROMAGNETIC_RATIO = 2 * math.pi * 28e9  # rad/s/T
SPIN_DENSITY = 4.22e27  # m^-3, YIG

QUADRATURES = ("x_a", "y_a", "x_m", "y_m", "x_b", "y_b")
MODES = ("photon", "magnon", "phonon")

# Not given for any figure; sweeps over delta_a are available.
DEFAULT_DELTA_A = 1.0


class DriftConvention(str, Enum):
    CONSISTENT = "consistent"
    PAPER_VERBATIM = "paper_verbatim"


@dataclass(frozen=True)
class SystemParams:
    """
    One model instance. Rates and detunings are in units of the phonon
    frequency `omega_b`.
    """

    delta_a: float
    delta_m: float
    g_am: float
    g_mb_eff: float
    gamma_a: float
    gamma_m: float
    gamma_b: float
    n_a: float = 0.0
    n_m: float = 0.0
    n_b: float = 0.0
    omega_b: float = 1.0
    drift_convention: DriftConvention = DriftConvention.CONSISTENT

    def __post_init__(self):
        for name in PARAMETER_NAMES:
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)):
                raise ParameterError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        for name in ("omega_b", "gamma_a", "gamma_m", "gamma_b"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("g_am", "g_mb_eff", "n_a", "n_m", "n_b"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0, got {getattr(self, name)}")
        try:
            convention = DriftConvention(self.drift_convention)
        except ValueError:
            valid = [c.value for c in DriftConvention]
            raise ParameterError(
                f"Unknown drift convention {self.drift_convention!r}, choose from {valid}"
            )
        object.__setattr__(self, "drift_convention", convention)

    @property
    def gammas(self) -> tuple[float, float, float]:
        return (self.gamma_a, self.gamma_m, self.gamma_b)

    @property
    def occupations(self) -> tuple[float, float, float]:
        return (self.n_a, self.n_m, self.n_b)


PARAMETER_NAMES = tuple(
    f.name for f in fields(SystemParams) if f.name != "drift_convention"
)


@dataclass(frozen=True)
class MicroscopicParams:
    """
    Laboratory-frame quantities in SI units (angular frequencies in rad/s).
    When `drive_rabi` is None, the drive is derived from the field amplitude
    and the sphere size.
    """

    omega_a: float
    omega_m: float
    omega_d: float
    g_mb_bare: float
    drive_rabi: Optional[float] = None
    temperature: float = 0.0
    sphere_diameter: float = 1e-3
    field_amplitude: float = 0.0

    def __post_init__(self):
        if self.omega_a <= 0 or self.omega_m <= 0:
            raise ParameterError("omega_a and omega_m must be > 0")
        if self.temperature < 0:
            raise ParameterError(f"temperature must be >= 0, got {self.temperature}")
        if self.sphere_diameter <= 0:
            raise ParameterError("sphere_diameter must be > 0")
        if self.field_amplitude < 0:
            raise ParameterError("field_amplitude must be >= 0")
        if self.drive_rabi is not None and self.drive_rabi < 0:
            raise ParameterError("drive_rabi must be >= 0")

    @property
    def delta_a(self) -> float:
        return self.omega_a - self.omega_d

    @property
    def delta_m(self) -> float:
        return self.omega_m - self.omega_d

    def drive(self) -> float:
        if self.drive_rabi is not None:
            return self.drive_rabi
        return rabi_frequency(self.field_amplitude, self.sphere_diameter)


@dataclass(frozen=True)
class MatrixPair:
    drift: np.ndarray
    diffusion: np.ndarray
    convention: DriftConvention
    ordering: tuple[str, ...] = QUADRATURES


class EffectiveParams(NamedTuple):
    g_mb_eff: float
    delta_m_eff: float
    detuning_shift_negligible: bool


def thermal_occupation(frequency: float, temperature: float) -> float:
    """Bose-Einstein occupation of a mode with angular frequency `frequency` [rad/s]"""
    if not frequency > 0:
        raise DomainError(f"frequency must be > 0, got {frequency}")
    if temperature < 0:
        raise DomainError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0:
        return 0.0
    x = HBAR * frequency / (K_B * temperature)
    return float(1.0 / np.expm1(x))


def rabi_frequency(field_amplitude: float, sphere_diameter: float) -> float:
    """
    Drive coupling sqrt(5)/4 * gamma_g * sqrt(N_t) * B_0 [rad/s] of a sphere
    with N_t = rho * pi d^3 / 6 spins.
    """
    if field_amplitude < 0 or sphere_diameter < 0:
        raise DomainError("field amplitude and sphere diameter must be >= 0")
    spins = SPIN_DENSITY * math.pi / 6 * sphere_diameter**3
    return math.sqrt(5) / 4 * GYROMAGNETIC_RATIO * math.sqrt(spins) * field_amplitude


def steady_state_amplitudes(
    micro: MicroscopicParams,
    g_am: float,
    gamma_a: float,
    gamma_m: float,
    gamma_b: float,
    omega_b: float,
) -> tuple[complex, complex]:
    """
    Coherent amplitudes (m_s, b_s) around which the dynamics is linearized.
    All rates share the units of `micro`.
    """
    cavity = complex(gamma_a, micro.delta_a)
    magnon = complex(gamma_m, micro.delta_m)
    denominator = g_am**2 + magnon * cavity
    scale = g_am**2 + abs(magnon) * abs(cavity)
    if abs(denominator) <= 8 * np.finfo(float).eps * scale:
        raise SingularityError(
            "Vanishing steady-state denominator at "
            f"delta_a={micro.delta_a:g}, delta_m={micro.delta_m:g}, g_am={g_am:g}, "
            f"gamma_a={gamma_a:g}, gamma_m={gamma_m:g}"
        )
    m_s = micro.drive() * cavity / denominator
    b_s = -1j * micro.g_mb_bare * abs(m_s) ** 2 / complex(gamma_b, omega_b)
    return complex(m_s), complex(b_s)


def effective_params(
    micro: MicroscopicParams,
    g_am: float,
    gamma_a: float,
    gamma_m: float,
    gamma_b: float,
    omega_b: float,
) -> EffectiveParams:
    m_s, b_s = steady_state_amplitudes(micro, g_am, gamma_a, gamma_m, gamma_b, omega_b)
    g_mb_eff = micro.g_mb_bare * abs(m_s)
    shift = micro.g_mb_bare * 2 * b_s.real
    delta_m_eff = micro.delta_m - shift
    negligible = shift == 0 or abs(shift) < 1e-3 * abs(micro.delta_m)
    return EffectiveParams(g_mb_eff, delta_m_eff, negligible)


def from_microscopic(
    micro: MicroscopicParams,
    g_am: float,
    gamma_a: float,
    gamma_m: float,
    gamma_b: float,
    omega_b: float,
    drift_convention: DriftConvention = DriftConvention.CONSISTENT,
) -> SystemParams:
    """Convert SI rates [rad/s] to a dimensionless SystemParams"""
    if not omega_b > 0:
        raise ParameterError(f"omega_b must be > 0, got {omega_b}")
    effective = effective_params(micro, g_am, gamma_a, gamma_m, gamma_b, omega_b)
    return SystemParams(
        delta_a=micro.delta_a / omega_b,
        delta_m=effective.delta_m_eff / omega_b,
        g_am=g_am / omega_b,
        g_mb_eff=effective.g_mb_eff / omega_b,
        gamma_a=gamma_a / omega_b,
        gamma_m=gamma_m / omega_b,
        gamma_b=gamma_b / omega_b,
        n_a=thermal_occupation(micro.omega_a, micro.temperature),
        n_m=thermal_occupation(micro.omega_m, micro.temperature),
        n_b=thermal_occupation(omega_b, micro.temperature),
        omega_b=1.0,
        drift_convention=drift_convention,
    )


def build_drift(params: SystemParams) -> np.ndarray:
    """
    Drift matrix of the quadratures (x_a, y_a, x_m, y_m, x_b, y_b).

    CONSISTENT follows from the Langevin equations with a real coupling and
    phonon damping on both quadratures. PAPER_VERBATIM is the printed matrix,
    which lacks the x_b damping and places the couplings at time-even entries.
    """
    p = params
    G = p.g_mb_eff
    A = np.zeros((6, 6))
    A[0] = [-p.gamma_a, p.delta_a, 0, p.g_am, 0, 0]
    A[1] = [-p.delta_a, -p.gamma_a, -p.g_am, 0, 0, 0]
    A[2] = [0, p.g_am, -p.gamma_m, p.delta_m, 0, 0]
    A[3] = [-p.g_am, 0, -p.delta_m, -p.gamma_m, 0, 0]
    A[4] = [0, 0, 0, 0, -p.gamma_b, p.omega_b]
    A[5] = [0, 0, 0, 0, -p.omega_b, -p.gamma_b]
    if p.drift_convention == DriftConvention.PAPER_VERBATIM:
        A[2, 4] = -G
        A[4, 4] = 0.0
        A[5, 3] = G
    else:
        A[3, 4] = -G
        A[5, 2] = -G
    return A


def build_diffusion(params: SystemParams) -> np.ndarray:
    entries = [
        gamma * (2 * n + 1) for gamma, n in zip(params.gammas, params.occupations)
    ]
    return np.diag(np.repeat(entries, 2))


def build_matrices(params: SystemParams) -> MatrixPair:
    return MatrixPair(
        drift=build_drift(params),
        diffusion=build_diffusion(params),
        convention=params.drift_convention,
    )
