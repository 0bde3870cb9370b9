from __future__ import annotations

from typing import Optional


class MagnothermError(Exception):
    pass


class ParameterError(MagnothermError, ValueError):
    """Invalid parameter record or sweep definition"""


class DomainError(MagnothermError, ValueError):
    """Input outside the mathematical domain of an operation"""


class ConfigError(ParameterError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.message = message
        if line > 0:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class NumericError(MagnothermError, ArithmeticError):
    pass


class SingularityError(NumericError):
    pass


class _StabilityError(NumericError):
    def __init__(self, message: str, spectral_abscissa: float):
        self.spectral_abscissa = spectral_abscissa
        super().__init__(f"{message} (spectral abscissa {spectral_abscissa:.6g})")


class InstabilityError(_StabilityError):
    pass


class MarginalStabilityError(_StabilityError):
    pass


class NonConvergenceError(NumericError):
    def __init__(
        self,
        message: str,
        spectral_abscissa: Optional[float] = None,
        steps: Optional[int] = None,
    ):
        self.spectral_abscissa = spectral_abscissa
        self.steps = steps
        details = []
        if steps is not None:
            details.append(f"{steps} steps")
        if spectral_abscissa is not None:
            details.append(f"spectral abscissa {spectral_abscissa:.6g}")
        if details:
            message = f"{message} ({', '.join(details)})"
        super().__init__(message)


class IntegrationDivergedError(NumericError):
    pass
