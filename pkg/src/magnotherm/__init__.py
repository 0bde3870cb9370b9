from __future__ import annotations

import magnotherm.axes as axes
import magnotherm.dynamics as dynamics
import magnotherm.export as export
import magnotherm.thermo as thermo
from magnotherm.config import load_config, parse_config
from magnotherm.dynamics import (
    integrate_covariance,
    rk4_propagator,
    rk4_step,
    steady_state_by_integration,
)
from magnotherm.exceptions import (
    ConfigError,
    DomainError,
    InstabilityError,
    IntegrationDivergedError,
    MagnothermError,
    MarginalStabilityError,
    NonConvergenceError,
    NumericError,
    ParameterError,
    SingularityError,
)
from magnotherm.model import (
    DriftConvention,
    MicroscopicParams,
    SystemParams,
    build_diffusion,
    build_drift,
    build_matrices,
    effective_params,
    from_microscopic,
    rabi_frequency,
    steady_state_amplitudes,
    thermal_occupation,
)
from magnotherm.smallmat import (
    char_poly,
    lyapunov_solve,
    routh_hurwitz,
    routh_hurwitz_stable,
    spectral_abscissa,
    stability,
    symplectic_eigenvalues,
)
from magnotherm.sweep import (
    PRESET_NAMES,
    SteadyStateReport,
    SweepSpec,
    SweepTable,
    curve,
    evaluate_point,
    preset,
    run_sweep,
)
from magnotherm.thermo import (
    Scope,
    entropy_flux,
    entropy_production_stationary,
    entropy_production_trace,
    mutual_information,
    time_reversal_split,
)
