import math

import numpy as np
import pytest
from conftest import figure_point

import magnotherm.axes as axes
from magnotherm import export
from magnotherm.exceptions import ParameterError
from magnotherm.sweep import (
    PRESET_NAMES,
    SweepSpec,
    curve,
    evaluate_point,
    preset,
    run_sweep,
)


def test_equilibrium_point(equilibrium):
    report = evaluate_point(equilibrium)
    assert report.stable and not report.marginal
    assert report.pi_total == pytest.approx(0, abs=1e-10)
    assert report.pi_mb == pytest.approx(0, abs=1e-10)
    assert report.mutual_info == pytest.approx(0, abs=1e-10)
    assert math.isnan(report.weak_coupling_ratio)
    assert report.phi == report.pi_total
    np.testing.assert_allclose(
        np.diag(report.covariance), [0.5, 0.5, 0.5, 0.5, 10.5, 10.5], atol=1e-10
    )


def test_stable_point(point):
    report = evaluate_point(point)
    assert report.stable
    assert report.hurwitz_stable
    assert report.pi_trace == pytest.approx(report.pi_total, rel=1e-8)
    assert report.pi_total >= report.pi_mb > 0
    assert report.weak_coupling_estimate == pytest.approx(report.pi_mb / (2 * 0.51))
    assert report.weak_coupling_ratio == pytest.approx(
        report.mutual_info / report.weak_coupling_estimate
    )
    assert min(report.nu) >= 0.5 - 1e-9
    assert report.irreversible_offdiagonal == 0.0


def test_unstable_point_has_no_measures():
    report = evaluate_point(figure_point(g_am=0.0, g_mb_eff=1.0, delta_m=-1.0))
    assert not report.stable
    assert report.spectral_abscissa > 0
    assert math.isnan(report.pi_total) and math.isnan(report.mutual_info)
    assert all(math.isnan(nu) for nu in report.nu)
    assert report.covariance is None


def test_paper_verbatim_point_reports_its_offdiagonal_drift():
    report = evaluate_point(figure_point(drift_convention="paper_verbatim"))
    assert report.irreversible_offdiagonal == pytest.approx(0.1)


def _small_spec(**kwargs) -> SweepSpec:
    values = dict(
        base=figure_point(),
        axis1=axes.linear("delta_m", -2, 2, 9),
        curve=curve("g_am", [0, 1]),
    )
    values.update(kwargs)
    return SweepSpec(**values)


def test_sweep_row_order():
    spec = _small_spec(axis2=axes.linear("n_b", 10, 100, 2))
    table = run_sweep(spec)
    assert len(table) == len(spec) == 36
    keys = [(r.curve_value, r.axis2_value, r.axis1_value) for r in table]
    assert keys == sorted(keys)
    assert keys[0] == (0.0, 10.0, -2.0)
    assert keys[9] == (0.0, 100.0, -2.0)
    assert keys[18] == (1.0, 10.0, -2.0)


def test_sweep_rows_match_single_points():
    table = run_sweep(_small_spec())
    for row in table:
        expected = evaluate_point(figure_point(g_am=row.curve_value, delta_m=row.axis1_value))
        if expected.stable:
            assert row.report == expected
        else:
            assert not row.report.stable


def test_sweep_table_columns():
    table = run_sweep(_small_spec())
    np.testing.assert_array_equal(table.axis1_values(1.0), np.linspace(-2, 2, 9))
    assert table.column("pi_total", 1.0).shape == (9,)
    assert len(table.select()) == 18


def test_sweep_is_deterministic():
    first = export.csv_text(run_sweep(_small_spec()), timestamp=False)
    second = export.csv_text(run_sweep(_small_spec()), timestamp=False)
    assert first == second


@pytest.mark.parametrize("executor", ["threads", "processes"])
def test_parallel_sweep_matches_serial(executor):
    serial = export.csv_text(run_sweep(_small_spec()), timestamp=False)
    parallel = export.csv_text(run_sweep(_small_spec(), jobs=3, executor=executor), timestamp=False)
    assert parallel == serial


def test_csv_layout():
    spec = _small_spec(
        base=figure_point(g_mb_eff=1.0), axis1=axes.linear("delta_m", -1, 1, 3), curve=None
    )
    lines = export.csv_text(run_sweep(spec)).split("\n")
    assert lines[0].startswith("# magnotherm sweep ")
    assert lines[1] == ",".join(export.COLUMNS)
    assert lines[-1] == ""
    rows = [line.split(",") for line in lines[2:-1]]
    assert len(rows) == 3
    for row in rows:
        assert row[:3] == ["", "", ""]
        assert len(row) == len(export.COLUMNS)
        measures = row[6:]
        if row[4] == "true":
            assert all(math.isfinite(float(value)) for value in measures)
        else:
            assert row[4] == "false"
            assert all(value == "nan" for value in measures)
    assert rows[0][3] == "-1.0000000000000000e+00"


def test_sweep_writes_its_output(tmp_path):
    path = tmp_path / "nested" / "sweep.csv"
    table = run_sweep(_small_spec(output=str(path)), timestamp=False)
    assert path.read_text() == export.csv_text(table, timestamp=False)


def test_sweep_fails_early_on_an_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError):
        run_sweep(_small_spec(output=str(blocker / "sweep.csv")))


def test_sweep_parameters_must_be_distinct():
    with pytest.raises(ParameterError, match="distinct"):
        _small_spec(curve=curve("delta_m", [0, 1]))


def test_curve_validation():
    with pytest.raises(ParameterError):
        curve("temperature", [1])
    with pytest.raises(ParameterError):
        curve("g_am", [])


def test_presets():
    assert set(PRESET_NAMES) == {
        "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig4a", "fig4b", "fig4c"
    }
    fig2a = preset("fig2a")
    assert fig2a.base.gamma_a == 0.1
    assert fig2a.base.n_b == 10
    assert (fig2a.base.g_mb_eff, fig2a.base.gamma_b, fig2a.base.gamma_m) == (0.1, 0.01, 0.5)
    assert fig2a.curve.values == (0, 1, 2)
    assert fig2a.axis1 == axes.linear("delta_m", -5, 5, 1001)
    assert preset("fig2d").base.n_b == 100 and preset("fig2d").base.gamma_a == 1.0
    fig3a = preset("fig3a")
    assert fig3a.curve.param == "gamma_a" and fig3a.curve.values == (0.1, 1, 2)
    assert fig3a.base.delta_m == 1.0 and fig3a.base.n_b == 100
    assert preset("fig3b").axis1.param == "gamma_a"
    assert preset("fig4b").curve == ("g_am", (1,))
    assert fig2a.base.delta_a == 1.0
    assert all(preset(name).base.delta_a == 0.0 for name in ("fig4a", "fig4b", "fig4c"))
    assert preset("fig2a", delta_a=-1.0).base.delta_a == -1.0
    assert preset("fig4a", delta_a=2.0, count=11).base.delta_a == 2.0
    assert len(preset("fig4a", count=11)) == 11


def test_unknown_preset_lists_the_choices():
    with pytest.raises(ParameterError, match="fig2a"):
        preset("fig9")
