import math

import numpy as np
import pytest
from conftest import figure_point

from magnotherm import thermo
from magnotherm.exceptions import DomainError
from magnotherm.model import DriftConvention, build_matrices
from magnotherm.smallmat import lyapunov_solve


def _stationary(params):
    matrices = build_matrices(params)
    V = lyapunov_solve(matrices.drift, matrices.diffusion)
    return matrices.drift, matrices.diffusion, V


def test_time_reversal_split_adds_up(point):
    A = build_matrices(point).drift
    split = thermo.time_reversal_split(A)
    np.testing.assert_array_equal(split.a_irr + split.a_rev, A)


def test_consistent_drift_has_a_diagonal_irreversible_part(point):
    split = thermo.time_reversal_split(build_matrices(point).drift)
    np.testing.assert_array_equal(split.a_irr, np.diag([-0.1, -0.1, -0.5, -0.5, -0.01, -0.01]))
    assert thermo.irreversible_offdiagonal(split) == 0.0


def test_paper_verbatim_drift_has_an_offdiagonal_irreversible_part():
    params = figure_point(drift_convention=DriftConvention.PAPER_VERBATIM)
    split = thermo.time_reversal_split(build_matrices(params).drift)
    assert thermo.irreversible_offdiagonal(split) == pytest.approx(params.g_mb_eff)


def test_equilibrium_produces_no_entropy(equilibrium):
    A, D, V = _stationary(equilibrium)
    split = thermo.time_reversal_split(A)
    assert thermo.entropy_production_stationary(V, equilibrium) == pytest.approx(0, abs=1e-12)
    assert thermo.entropy_production_trace(V, split, D) == pytest.approx(0, abs=1e-12)
    assert thermo.mutual_information(V) == pytest.approx(0, abs=1e-12)


def test_trace_formula_matches_mode_sum_at_steady_state(point):
    A, D, V = _stationary(point)
    split = thermo.time_reversal_split(A)
    pi_total = thermo.entropy_production_stationary(V, point)
    assert pi_total > 0
    assert thermo.entropy_production_trace(V, split, D) == pytest.approx(pi_total, rel=1e-8)
    assert thermo.entropy_production_reduced(V, split, D) == pytest.approx(pi_total, rel=1e-8)


def test_scopes_differ_by_the_photon_term(point):
    _, _, V = _stationary(point)
    terms = thermo.mode_entropy_production(V, point)
    pi_total = thermo.entropy_production_stationary(V, point, thermo.Scope.THREE_MODE)
    pi_mb = thermo.entropy_production_stationary(V, point, "magnon_phonon")
    assert pi_total - pi_mb == pytest.approx(terms[0])


def test_magnon_phonon_scope_with_thermal_magnons():
    params = figure_point(n_m=2.0)
    _, _, V = _stationary(params)
    variances = np.diag(V)[0::2] + np.diag(V)[1::2]
    expected = 2 * 0.5 * (variances[1] / 5 - 1) + 2 * 0.01 * (variances[2] / 21 - 1)
    pi_mb = thermo.entropy_production_stationary(V, params, thermo.Scope.MAGNON_PHONON)
    assert pi_mb == pytest.approx(expected)


def test_trace_formula_is_non_negative_away_from_steady_state(point):
    A, D, _ = _stationary(point)
    split = thermo.time_reversal_split(A)
    rng = np.random.default_rng(5)
    for _ in range(50):
        X = rng.normal(size=(6, 6))
        V = X @ X.T + 0.5 * np.eye(6)
        assert thermo.entropy_production_trace(V, split, D) >= -1e-9


def test_trace_formula_needs_every_bath():
    split = thermo.time_reversal_split(-np.eye(2))
    with pytest.raises(DomainError):
        thermo.entropy_production_trace(np.eye(2), split, np.diag([1.0, 0.0]))


def test_entropy_flux_balances_the_entropy_rate():
    assert thermo.entropy_flux(0.3, 0.1) == pytest.approx(0.2)
    assert thermo.entropy_flux(0.3, 0.0) == 0.3


def test_wigner_entropy_of_the_vacuum():
    assert thermo.wigner_entropy(np.eye(6) / 2) == pytest.approx(3 * math.log(math.pi * math.e))


def test_wigner_entropy_rate_vanishes_for_a_constant_state():
    assert thermo.wigner_entropy_rate(np.eye(4), np.zeros((4, 4))) == 0.0
    assert thermo.wigner_entropy_rate(np.eye(2), np.eye(2)) == pytest.approx(1.0)


def test_mutual_information_of_a_two_mode_squeezed_state():
    r = 0.4
    c, s = math.cosh(2 * r) / 2, math.sinh(2 * r) / 2
    V = np.eye(6) / 2
    V[2:, 2:] = np.block(
        [[c * np.eye(2), s * np.diag([1.0, -1.0])], [s * np.diag([1.0, -1.0]), c * np.eye(2)]]
    )
    assert thermo.mutual_information(V) == pytest.approx(2 * math.log(math.cosh(2 * r)))
    assert thermo.mutual_information(V, 0, 1) == pytest.approx(0, abs=1e-14)


def test_mutual_information_needs_distinct_modes():
    with pytest.raises(DomainError):
        thermo.mutual_information(np.eye(6) / 2, 1, 1)


def test_weak_coupling_estimate():
    assert thermo.weak_coupling_estimate(0.51, 0.51) == pytest.approx(0.5)


def test_mode_indices():
    assert thermo.mode_indices(1, 2) == [2, 3, 4, 5]


def test_mutual_information_of_weakly_correlated_modes():
    c = 0.5
    V = np.eye(6) / 2
    V[2:, 2:] = [
        [1, 0, c, 0],
        [0, 1, 0, -c],
        [c, 0, 1, 0],
        [0, -c, 0, 1],
    ]
    assert thermo.mutual_information(V) == pytest.approx(math.log(4 / 3))


def test_paper_verbatim_decoupled_phonon_produces_entropy():
    params = figure_point(
        g_am=0.0, g_mb_eff=0.0, drift_convention=DriftConvention.PAPER_VERBATIM
    )
    _, _, V = _stationary(params)
    np.testing.assert_allclose(
        V[4:, 4:], [[21.00105, -0.105], [-0.105, 21.0]], rtol=0, atol=1e-9
    )
    pi = thermo.entropy_production_stationary(V, params, thermo.Scope.THREE_MODE)
    assert pi == pytest.approx(2 * 0.01 * (42.00105 / 21 - 1), rel=1e-9)
    assert pi == pytest.approx(0.0200001, rel=1e-6)


def test_weak_coupling_ratio():
    assert thermo.weak_coupling_ratio(0.3, 0.2) == pytest.approx(1.5)
    assert math.isnan(thermo.weak_coupling_ratio(0.0, 0.0))
