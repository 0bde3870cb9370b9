"""
Flat `key = value` configuration files.

Rates are in units of omega_b (`units = dimensionless`, the default) or, with
`units = si`, ordinary frequencies in Hz (f = omega / 2 pi) that are divided
by `omega_b`. Sweep axis and curve values are always in units of omega_b.
"""
from __future__ import annotations

import math
from typing import NamedTuple, Optional, Union

import magnotherm.axes as axes
from magnotherm.exceptions import ConfigError, ParameterError
from magnotherm.model import (
    DEFAULT_DELTA_A,
    PARAMETER_NAMES,
    DriftConvention,
    MicroscopicParams,
    SystemParams,
    effective_params,
    thermal_occupation,
)
from magnotherm.sweep import SweepSpec, curve

REQUIRED = ("delta_m", "g_am", "g_mb_eff", "gamma_a", "gamma_m", "gamma_b", "n_b")
POSITIVE = ("omega_b", "gamma_a", "gamma_m", "gamma_b")
NON_NEGATIVE = ("g_am", "g_mb_eff", "n_a", "n_m", "n_b")

SI_KEYS = (
    "temperature",
    "omega_a",
    "omega_m",
    "omega_d",
    "g_mb_bare",
    "drive_rabi",
    "field_amplitude",
    "sphere_diameter",
)
AXIS_FIELDS = ("param", "start", "stop", "count", "spacing")
SWEEP_KEYS = (
    *(f"sweep.axis1.{f}" for f in AXIS_FIELDS),
    *(f"sweep.axis2.{f}" for f in AXIS_FIELDS),
    "sweep.curve.param",
    "sweep.curve.values",
)
KNOWN_KEYS = frozenset(
    (*PARAMETER_NAMES, "drift_convention", "units", *SI_KEYS, *SWEEP_KEYS, "output", "name")
)


class Entry(NamedTuple):
    value: str
    line: int
    column: int


class _Entries(dict):
    def error(self, key: str, message: str) -> ConfigError:
        entry = self[key]
        return ConfigError(message, entry.line, entry.column)

    def number(self, key: str) -> float:
        entry = self[key]
        try:
            value = float(entry.value)
        except ValueError:
            raise self.error(key, f"malformed number {entry.value!r} for {key}")
        if not math.isfinite(value):
            raise self.error(key, f"{key} must be finite, got {entry.value!r}")
        return value

    def integer(self, key: str) -> int:
        entry = self[key]
        try:
            return int(entry.value)
        except ValueError:
            raise self.error(key, f"malformed integer {entry.value!r} for {key}")

    def get_number(self, key: str, default: Optional[float] = None) -> Optional[float]:
        return self.number(key) if key in self else default

    def require(self, key: str):
        if key not in self:
            raise ConfigError(f"missing required key {key!r}")


def tokenize(text: str) -> _Entries:
    entries = _Entries()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            column = len(line) - len(line.lstrip()) + 1
            raise ConfigError("expected `key = value`", lineno, column)
        left, right = line.split("=", 1)
        key = left.strip()
        key_column = len(left) - len(left.lstrip()) + 1
        value_column = len(left) + 2 + len(right) - len(right.lstrip())
        if not key:
            raise ConfigError("empty key", lineno, key_column)
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno, key_column)
        if key in entries:
            raise ConfigError(
                f"duplicate key {key!r} (first set on line {entries[key].line})",
                lineno,
                key_column,
            )
        value = right.strip()
        if not value:
            raise ConfigError(f"missing value for {key!r}", lineno, value_column)
        entries[key] = Entry(value, lineno, value_column)
    return entries


def parse_config(text: str) -> Union[SystemParams, SweepSpec]:
    entries = tokenize(text)
    units = entries["units"].value if "units" in entries else "dimensionless"
    if units == "dimensionless":
        for key in SI_KEYS:
            if key in entries:
                raise entries.error(key, f"{key} is only valid with units = si")
        values = _dimensionless_values(entries)
    elif units == "si":
        values = _si_values(entries)
    else:
        raise entries.error("units", f"unknown units {units!r}, choose dimensionless or si")

    if "drift_convention" in entries:
        try:
            values["drift_convention"] = DriftConvention(entries["drift_convention"].value)
        except ValueError:
            valid = [c.value for c in DriftConvention]
            raise entries.error(
                "drift_convention", f"unknown drift convention, choose from {valid}"
            )

    try:
        params = SystemParams(**values)
    except ParameterError as e:
        raise ConfigError(str(e))

    if not any(key.startswith("sweep.") for key in entries):
        if "output" in entries:
            raise entries.error("output", "output requires a sweep definition")
        return params
    return _sweep_spec(entries, params)


def _checked(entries: _Entries, key: str, value: float) -> float:
    if key in POSITIVE and not value > 0:
        raise entries.error(key, f"{key} must be > 0, got {value:g}")
    if key in NON_NEGATIVE and value < 0:
        raise entries.error(key, f"{key} must be >= 0, got {value:g}")
    return value


def _dimensionless_values(entries: _Entries) -> dict:
    for key in REQUIRED:
        entries.require(key)
    values = {"delta_a": DEFAULT_DELTA_A, "omega_b": 1.0, "n_a": 0.0, "n_m": 0.0}
    for key in PARAMETER_NAMES:
        if key in entries:
            values[key] = _checked(entries, key, entries.number(key))
    return values


def _si_values(entries: _Entries) -> dict:
    """Hz -> units of omega_b; occupations from the temperature if missing"""
    entries.require("omega_b")
    f_b = _checked(entries, "omega_b", entries.number("omega_b"))
    for key in ("g_am", "gamma_a", "gamma_m", "gamma_b"):
        entries.require(key)

    values = {"omega_b": 1.0}
    for key in ("g_am", "gamma_a", "gamma_m", "gamma_b", "g_mb_eff"):
        if key in entries:
            values[key] = _checked(entries, key, entries.number(key)) / f_b

    omega_a = entries.get_number("omega_a")
    omega_m = entries.get_number("omega_m")
    omega_d = entries.get_number("omega_d")

    if "delta_a" in entries:
        values["delta_a"] = entries.number("delta_a") / f_b
    elif omega_a is not None and omega_d is not None:
        values["delta_a"] = (omega_a - omega_d) / f_b
    else:
        values["delta_a"] = DEFAULT_DELTA_A

    if "delta_m" in entries:
        values["delta_m"] = entries.number("delta_m") / f_b
    elif omega_m is not None and omega_d is not None:
        values["delta_m"] = (omega_m - omega_d) / f_b
    else:
        raise ConfigError("missing required key 'delta_m' (or omega_m and omega_d)")

    if "g_mb_eff" not in entries:
        if "g_mb_bare" not in entries:
            raise ConfigError("missing required key 'g_mb_eff' (or g_mb_bare and a drive)")
        for key in ("omega_a", "omega_m", "omega_d"):
            entries.require(key)
        two_pi = 2 * math.pi
        drive = entries.get_number("drive_rabi")
        if drive is None and "field_amplitude" not in entries:
            raise ConfigError("g_mb_bare needs drive_rabi or field_amplitude")
        try:
            micro = MicroscopicParams(
                omega_a=two_pi * omega_a,  # type: ignore
                omega_m=two_pi * omega_m,  # type: ignore
                omega_d=two_pi * omega_d,  # type: ignore
                g_mb_bare=two_pi * entries.number("g_mb_bare"),
                drive_rabi=None if drive is None else two_pi * drive,
                temperature=entries.get_number("temperature", 0.0),  # type: ignore
                sphere_diameter=entries.get_number("sphere_diameter", 1e-3),  # type: ignore
                field_amplitude=entries.get_number("field_amplitude", 0.0),  # type: ignore
            )
        except ParameterError as e:
            raise ConfigError(str(e))
        effective = effective_params(
            micro,
            *(two_pi * values[key] * f_b for key in ("g_am", "gamma_a", "gamma_m", "gamma_b")),
            omega_b=two_pi * f_b,
        )
        values["g_mb_eff"] = effective.g_mb_eff / (two_pi * f_b)
        values["delta_m"] = effective.delta_m_eff / (two_pi * f_b)

    temperature = entries.get_number("temperature")
    for key, frequency in (("n_a", omega_a), ("n_m", omega_m), ("n_b", f_b)):
        if key in entries:
            values[key] = _checked(entries, key, entries.number(key))
        elif temperature is not None and frequency is not None:
            values[key] = thermal_occupation(2 * math.pi * frequency, temperature)
        elif key == "n_b":
            raise ConfigError("missing required key 'n_b' (or temperature)")
        else:
            values[key] = 0.0
    return values


def _axis(entries: _Entries, prefix: str) -> axes.AxisLinear:
    for name in ("param", "start", "stop", "count"):
        entries.require(f"{prefix}.{name}")
    spacing_key = f"{prefix}.spacing"
    spacing = entries[spacing_key].value if spacing_key in entries else "linear"
    try:
        return axes.axis(
            entries[f"{prefix}.param"].value,
            entries.number(f"{prefix}.start"),
            entries.number(f"{prefix}.stop"),
            entries.integer(f"{prefix}.count"),
            spacing,  # type: ignore
        )
    except ParameterError as e:
        raise entries.error(f"{prefix}.param", str(e))


def _sweep_spec(entries: _Entries, base: SystemParams) -> SweepSpec:
    axis1 = _axis(entries, "sweep.axis1")
    axis2 = None
    if any(key.startswith("sweep.axis2.") for key in entries):
        axis2 = _axis(entries, "sweep.axis2")

    sweep_curve = None
    if "sweep.curve.param" in entries or "sweep.curve.values" in entries:
        entries.require("sweep.curve.param")
        entries.require("sweep.curve.values")
        raw = entries["sweep.curve.values"].value
        try:
            values = [float(v) for v in raw.split(",") if v.strip()]
        except ValueError:
            raise entries.error("sweep.curve.values", f"malformed number list {raw!r}")
        try:
            sweep_curve = curve(entries["sweep.curve.param"].value, values)
        except ParameterError as e:
            raise entries.error("sweep.curve.param", str(e))

    try:
        return SweepSpec(
            base=base,
            axis1=axis1,
            axis2=axis2,
            curve=sweep_curve,
            output=entries["output"].value if "output" in entries else None,
            name=entries["name"].value if "name" in entries else "",
        )
    except ParameterError as e:
        raise ConfigError(str(e))


def load_config(filename: str) -> Union[SystemParams, SweepSpec]:
    with open(filename, "r", encoding="utf-8") as fp:
        return parse_config(fp.read())
