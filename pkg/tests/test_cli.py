import pytest

from magnotherm import export
from magnotherm.cli import EXIT_INVALID, EXIT_NUMERIC, EXIT_OK, EXIT_UNSTABLE, main

POINT = """\
delta_m = 1.0
g_am = 1.0
g_mb_eff = 0.1
gamma_a = 0.1
gamma_m = 0.5
gamma_b = 0.01
n_b = 10
"""

SWEEP = POINT + """\
sweep.axis1.param = delta_m
sweep.axis1.start = -2
sweep.axis1.stop = 2
sweep.axis1.count = 5
"""


@pytest.fixture
def write(tmp_path):
    def write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_point(write, capsys):
    assert main(["point", write("point.conf", POINT)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "stable" in out
    assert "pi_total" in out
    assert "symplectic spectrum" in out


def test_unstable_point_exits_with_3(write, capsys):
    text = POINT.replace("delta_m = 1.0", "delta_m = -1.0").replace("g_mb_eff = 0.1", "g_mb_eff = 1")
    assert main(["point", write("point.conf", text.replace("g_am = 1.0", "g_am = 0"))]) == (
        EXIT_UNSTABLE
    )
    assert "unstable" in capsys.readouterr().out


def test_invalid_config_exits_with_1(write, caplog):
    assert main(["point", write("point.conf", POINT + "delta_m = 2\n")]) == EXIT_INVALID
    assert "line 8, column 1" in caplog.text


def test_missing_file_exits_with_1(tmp_path):
    assert main(["point", str(tmp_path / "missing.conf")]) == EXIT_INVALID


def test_point_refuses_a_sweep_config(write):
    assert main(["point", write("sweep.conf", SWEEP)]) == EXIT_INVALID


def test_sweep_to_stdout(write, capsys):
    assert main(["sweep", write("sweep.conf", SWEEP), "--no-timestamp"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(export.COLUMNS)
    assert len(lines) == 6


def test_sweep_to_file_in_parallel(write, tmp_path):
    out = tmp_path / "sweep.csv"
    args = ["sweep", write("sweep.conf", SWEEP), "--out", str(out), "--no-timestamp"]
    assert main(args) == EXIT_OK
    serial = out.read_text()
    assert main(args + ["--jobs", "2", "--executor", "threads"]) == EXIT_OK
    assert out.read_text() == serial


def test_sweep_needs_sweep_keys(write):
    assert main(["sweep", write("point.conf", POINT)]) == EXIT_INVALID


def test_preset(tmp_path):
    out = tmp_path / "fig2a.csv"
    assert main(["-q", "preset", "fig2a", "--count", "5", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# magnotherm sweep fig2a ")
    assert len(lines) == 2 + 15


def test_preset_with_a_cavity_detuning(tmp_path):
    out = tmp_path / "fig4a.csv"
    args = ["preset", "fig4a", "--count", "3", "--delta-a", "2", "--out", str(out)]
    assert main(args + ["--no-timestamp"]) == EXIT_OK
    assert out.read_text().splitlines()[1].startswith("g_am,0.0000000000000000e+00,,")


def test_unknown_preset_is_a_usage_error():
    with pytest.raises(SystemExit):
        main(["preset", "fig9"])


def test_check(write, capsys):
    text = POINT.replace("g_am = 1.0", "g_am = 0")
    assert main(["check", write("point.conf", text)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "PASS  lyapunov residual" in out
    assert "ode oracle matches lyapunov" in out


def test_domain_error_exits_with_2(write, caplog):
    text = """\
units = si
omega_b = 10e6
delta_m = 10e6
g_am = 10e6
g_mb_eff = 1e6
gamma_a = 1e6
gamma_m = 5e6
gamma_b = 1e5
temperature = -0.1
"""
    assert main(["point", write("point.conf", text)]) == EXIT_NUMERIC
    assert "temperature must be >= 0" in caplog.text
