from __future__ import annotations

from math import log as _log
from typing import Literal

import numpy as np

from magnotherm.exceptions import ParameterError
from magnotherm.model import PARAMETER_NAMES

Spacing = Literal["linear", "log"]


class AxisLinear:
    spacing: Spacing = "linear"

    def __init__(self, param: str, start: float, stop: float, count: int):
        if param not in PARAMETER_NAMES:
            raise ParameterError(
                f"Unknown sweep parameter {param!r}, choose from {list(PARAMETER_NAMES)}"
            )
        if int(count) != count or count < 2:
            raise ParameterError(f"Sweep axis needs count >= 2, got {count}")
        if not start < stop:
            raise ParameterError(f"Sweep axis needs start < stop, got {start}, {stop}")
        self.param = param
        self.domain = [float(start), float(stop)]
        self.count = int(count)

    def values(self) -> np.ndarray:
        start, stop = self.domain
        return np.linspace(start, stop, self.count)

    def step(self) -> float:
        start, stop = self.domain
        return (stop - start) / (self.count - 1)

    def __repr__(self) -> str:
        start, stop = self.domain
        return f"{type(self).__name__}({self.param!r}, {start:g}, {stop:g}, {self.count})"

    def __eq__(self, other) -> bool:
        return (
            type(self) is type(other)
            and self.param == other.param
            and self.domain == other.domain
            and self.count == other.count
        )


class AxisLog(AxisLinear):
    spacing: Spacing = "log"

    def __init__(self, param: str, start: float, stop: float, count: int, base: float = 10):
        if not start > 0:
            raise ParameterError(f"Logarithmic axis needs start > 0, got {start}")
        super().__init__(param, start, stop, count)
        self.base = base
        lbase = _log(base)
        self.lmin = snap_to_int(_log(start) / lbase)
        self.lmax = snap_to_int(_log(stop) / lbase)

    def values(self) -> np.ndarray:
        values = self.base ** np.linspace(self.lmin, self.lmax, self.count)
        values[0], values[-1] = self.domain
        return values

    def step(self) -> float:
        """Step in log space"""
        return (self.lmax - self.lmin) / (self.count - 1)


def snap_to_int(number, eps=1e-12) -> float:
    rounded = float(round(number))
    if abs(number - rounded) < eps:
        return rounded
    else:
        return number


def axis(
    param: str, start: float, stop: float, count: int, spacing: Spacing = "linear"
) -> AxisLinear:
    if spacing == "linear":
        return AxisLinear(param, start, stop, count)
    elif spacing == "log":
        return AxisLog(param, start, stop, count)
    raise ParameterError(f"Unknown axis spacing {spacing!r}, choose linear or log")


linear = AxisLinear
log = AxisLog
