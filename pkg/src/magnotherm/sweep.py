from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterator, Literal, NamedTuple, Optional, Sequence

import numpy as np

import magnotherm.axes as axes
from magnotherm import export, thermo
from magnotherm.exceptions import ParameterError
from magnotherm.model import (
    DEFAULT_DELTA_A,
    PARAMETER_NAMES,
    DriftConvention,
    SystemParams,
    build_matrices,
)
from magnotherm.smallmat import lyapunov_solve, stability, symplectic_eigenvalues

logger = logging.getLogger(__name__)

Executor = Literal["threads", "processes"]

NAN = float("nan")


@dataclass(frozen=True)
class SteadyStateReport:
    stable: bool
    marginal: bool
    spectral_abscissa: float
    hurwitz_stable: bool
    pi_total: float = NAN
    pi_mb: float = NAN
    pi_trace: float = NAN
    phi: float = NAN
    mutual_info: float = NAN
    weak_coupling_estimate: float = NAN
    weak_coupling_ratio: float = NAN
    nu: tuple[float, ...] = (NAN, NAN, NAN)
    irreversible_offdiagonal: float = 0.0
    covariance: Optional[np.ndarray] = field(default=None, repr=False, compare=False)


def evaluate_point(
    params: SystemParams, gamma_tot: Optional[float] = None
) -> SteadyStateReport:
    """
    Stability check, stationary covariance and the thermodynamic measures of
    one parameter point. `gamma_tot` defaults to gamma_m + gamma_b.
    """
    matrices = build_matrices(params)
    A, D = matrices.drift, matrices.diffusion
    verdict = stability(A)
    split = thermo.time_reversal_split(A)
    offdiagonal = thermo.irreversible_offdiagonal(split)

    if not verdict.stable:
        logger.debug(
            "Unstable point (abscissa %.3g, %s): %s",
            verdict.spectral_abscissa,
            verdict.verdict,
            params,
        )
        return SteadyStateReport(
            stable=False,
            marginal=verdict.marginal,
            spectral_abscissa=verdict.spectral_abscissa,
            hurwitz_stable=verdict.hurwitz_stable,
            irreversible_offdiagonal=offdiagonal,
        )

    V = lyapunov_solve(A, D)
    pi_total = thermo.entropy_production_stationary(V, params, thermo.Scope.THREE_MODE)
    pi_mb = thermo.entropy_production_stationary(V, params, thermo.Scope.MAGNON_PHONON)
    if gamma_tot is None:
        gamma_tot = params.gamma_m + params.gamma_b
    mutual_info = thermo.mutual_information(V)
    estimate = thermo.weak_coupling_estimate(pi_mb, gamma_tot)
    return SteadyStateReport(
        stable=True,
        marginal=False,
        spectral_abscissa=verdict.spectral_abscissa,
        hurwitz_stable=verdict.hurwitz_stable,
        pi_total=pi_total,
        pi_mb=pi_mb,
        pi_trace=thermo.entropy_production_trace(V, split, D),
        phi=thermo.entropy_flux(pi_total, 0.0),
        mutual_info=mutual_info,
        weak_coupling_estimate=estimate,
        weak_coupling_ratio=thermo.weak_coupling_ratio(mutual_info, estimate),
        nu=symplectic_eigenvalues(V),
        irreversible_offdiagonal=offdiagonal,
        covariance=V,
    )


class Curve(NamedTuple):
    param: str
    values: tuple[float, ...]


def curve(param: str, values: Sequence[float]) -> Curve:
    if param not in PARAMETER_NAMES:
        raise ParameterError(
            f"Unknown curve parameter {param!r}, choose from {list(PARAMETER_NAMES)}"
        )
    if len(values) == 0:
        raise ParameterError("A curve needs at least one value")
    return Curve(param, tuple(float(v) for v in values))


@dataclass(frozen=True)
class SweepSpec:
    base: SystemParams
    axis1: axes.AxisLinear
    axis2: Optional[axes.AxisLinear] = None
    curve: Optional[Curve] = None
    output: Optional[str] = None
    name: str = ""

    def __post_init__(self):
        names = [self.axis1.param]
        if self.axis2 is not None:
            names.append(self.axis2.param)
        if self.curve is not None:
            names.append(self.curve.param)
        if len(set(names)) != len(names):
            raise ParameterError(f"Sweep parameters must be distinct, got {names}")

    def __len__(self) -> int:
        n = self.axis1.count
        if self.axis2 is not None:
            n *= self.axis2.count
        if self.curve is not None:
            n *= len(self.curve.values)
        return n

    def points(self) -> Iterator[tuple[Optional[float], Optional[float], float, SystemParams]]:
        """Grid points in output order: curve value, axis2 index, axis1 index"""
        curve_values = [None] if self.curve is None else list(self.curve.values)
        axis2_values = [None] if self.axis2 is None else list(self.axis2.values())
        for c in curve_values:
            for y in axis2_values:
                for x in self.axis1.values():
                    changes = {self.axis1.param: float(x)}
                    if y is not None:
                        changes[self.axis2.param] = float(y)  # type: ignore
                    if c is not None:
                        changes[self.curve.param] = c  # type: ignore
                    yield c, y, float(x), replace(self.base, **changes)


class SweepRow(NamedTuple):
    curve_value: Optional[float]
    axis2_value: Optional[float]
    axis1_value: float
    report: SteadyStateReport


class SweepTable:
    def __init__(self, spec: SweepSpec, rows: list[SweepRow]):
        self.spec = spec
        self.rows = rows

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def select(self, curve_value: Optional[float] = None) -> list[SweepRow]:
        if curve_value is None:
            return list(self.rows)
        return [r for r in self.rows if r.curve_value == curve_value]

    def axis1_values(self, curve_value: Optional[float] = None) -> np.ndarray:
        return np.array([r.axis1_value for r in self.select(curve_value)])

    def column(self, name: str, curve_value: Optional[float] = None) -> np.ndarray:
        """Values of a report field, optionally restricted to one curve"""
        return np.array([getattr(r.report, name) for r in self.select(curve_value)])

    def to_csv(self, filename: str, timestamp: bool = True):
        export.write_csv(self, filename, timestamp=timestamp)


def run_sweep(
    spec: SweepSpec,
    jobs: int = 1,
    executor: Executor = "processes",
    timestamp: bool = True,
) -> SweepTable:
    """
    Evaluate every grid point. Rows always come out in grid order, whatever
    the parallelism.
    """
    if spec.output is not None:
        export.ensure_writable(spec.output)

    grid = list(spec.points())
    params = [p for _, _, _, p in grid]
    logger.info(
        "Sweeping %s over %d points (%d jobs)", spec.name or spec.axis1.param, len(grid), jobs
    )
    if spec.base.drift_convention == DriftConvention.PAPER_VERBATIM:
        logger.warning(
            "The paper_verbatim drift has a non-diagonal irreversible part; "
            "pi_trace and pi_total are not expected to agree"
        )

    start = time.perf_counter()
    if jobs <= 1:
        reports = [evaluate_point(p) for p in params]
    else:
        pool = ProcessPoolExecutor if executor == "processes" else ThreadPoolExecutor
        chunksize = max(1, math.ceil(len(params) / (8 * jobs)))
        with pool(max_workers=jobs) as ex:
            if executor == "processes":
                reports = list(ex.map(evaluate_point, params, chunksize=chunksize))
            else:
                reports = list(ex.map(evaluate_point, params))

    rows = [SweepRow(c, y, x, report) for (c, y, x, _), report in zip(grid, reports)]
    table = SweepTable(spec, rows)
    unstable = sum(not r.report.stable for r in rows)
    marginal = sum(r.report.marginal for r in rows)
    logger.info(
        "Sweep finished in %.2fs: %d unstable, %d marginal",
        time.perf_counter() - start,
        unstable,
        marginal,
    )

    if spec.output is not None:
        table.to_csv(spec.output, timestamp=timestamp)
    return table


# Figure regimes, in units of omega_b.
_FIGURE_BASE = dict(g_mb_eff=0.1, gamma_b=0.01, gamma_m=0.5)

DETUNING_RANGE = (-5.0, 5.0)
COUPLING_RANGE = (0.0, 5.0)
CAVITY_DECAY_RANGE = (0.05, 5.0)
DEFAULT_COUNT = 1001

# The correlation regime drives the cavity on resonance
RESONANT_CAVITY_DELTA_A = 0.0

_FIGURE4_BASE = dict(gamma_a=1.0, n_b=10, delta_a=RESONANT_CAVITY_DELTA_A)

_PRESETS = {
    # name: (base overrides, axis parameter, axis range, curve parameter, curve values)
    "fig2a": (dict(gamma_a=0.1, n_b=10), "delta_m", DETUNING_RANGE, "g_am", (0, 1, 2)),
    "fig2b": (dict(gamma_a=0.1, n_b=100), "delta_m", DETUNING_RANGE, "g_am", (0, 1, 2)),
    "fig2c": (dict(gamma_a=1.0, n_b=10), "delta_m", DETUNING_RANGE, "g_am", (0, 1, 2)),
    "fig2d": (dict(gamma_a=1.0, n_b=100), "delta_m", DETUNING_RANGE, "g_am", (0, 1, 2)),
    "fig3a": (
        dict(gamma_a=0.1, n_b=100, delta_m=1.0),
        "g_am",
        COUPLING_RANGE,
        "gamma_a",
        (0.1, 1, 2),
    ),
    "fig3b": (
        dict(g_am=0.1, n_b=100, delta_m=1.0),
        "gamma_a",
        CAVITY_DECAY_RANGE,
        "g_am",
        (0.1, 1, 2),
    ),
    "fig4a": (_FIGURE4_BASE, "delta_m", DETUNING_RANGE, "g_am", (0,)),
    "fig4b": (_FIGURE4_BASE, "delta_m", DETUNING_RANGE, "g_am", (1,)),
    "fig4c": (_FIGURE4_BASE, "delta_m", DETUNING_RANGE, "g_am", (2,)),
}

PRESET_NAMES = tuple(_PRESETS)


def preset(
    name: str,
    delta_a: Optional[float] = None,
    count: int = DEFAULT_COUNT,
    output: Optional[str] = None,
    drift_convention: DriftConvention = DriftConvention.CONSISTENT,
) -> SweepSpec:
    if name not in _PRESETS:
        raise ParameterError(f"Unknown preset {name!r}, choose from {list(PRESET_NAMES)}")
    overrides, param, (start, stop), curve_param, curve_values = _PRESETS[name]
    base_values = dict(
        delta_a=DEFAULT_DELTA_A,
        delta_m=1.0,
        g_am=0.0,
        gamma_a=0.1,
        n_b=10.0,
        drift_convention=drift_convention,
    )
    base_values.update(_FIGURE_BASE)
    base_values.update(overrides)
    if delta_a is not None:
        base_values["delta_a"] = delta_a
    return SweepSpec(
        base=SystemParams(**base_values),
        axis1=axes.linear(param, start, stop, count),
        curve=curve(curve_param, curve_values),
        output=output,
        name=name,
    )
