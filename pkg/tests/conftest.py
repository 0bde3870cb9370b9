import pytest

from magnotherm.model import SystemParams


def figure_point(**changes) -> SystemParams:
    """A point in the Fig. 2(a) regime, in units of omega_b"""
    values = dict(
        delta_a=1.0,
        delta_m=1.0,
        g_am=1.0,
        g_mb_eff=0.1,
        gamma_a=0.1,
        gamma_m=0.5,
        gamma_b=0.01,
        n_b=10.0,
    )
    values.update(changes)
    return SystemParams(**values)


@pytest.fixture
def point() -> SystemParams:
    return figure_point()


@pytest.fixture
def equilibrium() -> SystemParams:
    return figure_point(g_am=0.0, g_mb_eff=0.0)
