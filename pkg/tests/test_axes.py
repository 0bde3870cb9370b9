import numpy as np
import pytest

import magnotherm.axes as axes
from magnotherm.exceptions import ParameterError


def test_linear_axis_values():
    axis = axes.linear("delta_m", -5, 5, 1001)
    values = axis.values()
    assert len(values) == 1001
    assert values[0] == -5 and values[-1] == 5
    assert values[500] == pytest.approx(0.0, abs=1e-15)
    assert axis.step() == pytest.approx(0.01)


def test_log_axis_values():
    axis = axes.log("gamma_a", 0.01, 100, 5)
    np.testing.assert_allclose(axis.values(), [0.01, 0.1, 1, 10, 100], rtol=1e-12)
    assert axis.values()[0] == 0.01 and axis.values()[-1] == 100
    assert axis.step() == pytest.approx(1.0)


def test_axis_factory():
    assert axes.axis("g_am", 0, 5, 11) == axes.linear("g_am", 0, 5, 11)
    assert isinstance(axes.axis("gamma_a", 0.1, 5, 11, "log"), axes.AxisLog)
    with pytest.raises(ParameterError, match="spacing"):
        axes.axis("g_am", 0, 5, 11, "cubic")


@pytest.mark.parametrize(
    "param, start, stop, count",
    [
        ("temperature", 0, 1, 3),
        ("delta_m", 1, 1, 3),
        ("delta_m", 2, 1, 3),
        ("delta_m", 0, 1, 1),
        ("delta_m", 0, 1, 2.5),
    ],
)
def test_invalid_axes(param, start, stop, count):
    with pytest.raises(ParameterError):
        axes.linear(param, start, stop, count)


def test_log_axis_needs_positive_start():
    with pytest.raises(ParameterError):
        axes.log("gamma_a", 0, 1, 3)


def test_snap_to_int():
    assert axes.snap_to_int(2.0000000000001) == 2.0
    assert axes.snap_to_int(2.1) == 2.1
