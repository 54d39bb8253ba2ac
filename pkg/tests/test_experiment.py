import math
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vortexhop.cli import main
from vortexhop.errors import ConfigError
from vortexhop.experiment import (
    CSV_HEADER,
    PRESETS,
    Row,
    emit_csv,
    format_csv,
    load_spec,
    parse_grid,
    parse_spec,
    preset_paths,
    read_csv,
    run_experiment,
)
from vortexhop.system import db_to_linear, linear_to_db

BASE = """
[experiment]
name = small
schemes = MH, MFH
axis = SNR_dB
grid = 0:10:5
hops = 1, 2

[system]
N = 4
Q = 2
K = 3
m = 1
mu = DPSK

[mc]
trials = 2000
seed = 1

[output]
csv = small.csv
"""


def with_line(section: str, line: str) -> str:
    return BASE.replace(f"[{section}]\n", f"[{section}]\n{line}\n", 1)


def test_parse_grid_forms():
    assert parse_grid("0:30:1") == tuple(float(i) for i in range(31))
    assert parse_grid("1:2:0.25") == (1.0, 1.25, 1.5, 1.75, 2.0)
    assert parse_grid("3, 1, 2") == (3.0, 1.0, 2.0)
    for bad in ("", "1:2", "a,b", "5:1:1", "0:1:0"):
        with pytest.raises(ConfigError):
            parse_grid(bad)


@given(st.floats(-50, 50))
def test_db_round_trip(db):
    assert abs(linear_to_db(db_to_linear(db)) - db) <= 1e-12


def test_parse_small_spec():
    spec = parse_spec(BASE)
    assert spec.schemes == ("MH", "MFH")
    assert spec.grid == (0.0, 5.0, 10.0)
    assert spec.base.K == 3 and spec.base.Q == 2
    assert spec.mc.trials == 2000


@pytest.mark.parametrize(
    "text,field",
    [
        (with_line("system", "mu = 0.7").replace("mu = DPSK\n", ""), "system.mu"),
        (BASE.replace("m = 1", "m = 1.5"), "system.m"),
        (BASE.replace("grid = 0:10:5", "grid = "), "experiment.grid"),
        (BASE.replace("schemes = MH, MFH", "schemes = XH"), "experiment.schemes"),
        (BASE.replace("axis = SNR_dB", "axis = power"), "experiment.axis"),
        (BASE.replace("hops = 1, 2", "hops = 0"), "experiment.hops"),
        (with_line("system", "colour = red"), "system.colour"),
        (BASE.replace("trials = 2000", "trials = 10"), "mc.trials"),
        (BASE.replace("N = 4", "N = four"), "system.N"),
        (BASE.replace("axis = SNR_dB", "axis = K").replace("grid = 0:10:5", "grid = 1.5"), "experiment.grid"),
        (with_line("experiment", "axis2 = SNR_dB\ngrid2 = 1"), "experiment.axis2"),
        (BASE.replace("K = 3", "K = -1"), "system"),
    ],
)
def test_validation_reports_field(text, field):
    with pytest.raises(ConfigError) as info:
        parse_spec(text)
    assert info.value.field == field


def test_row_count_and_order():
    rows = run_experiment(parse_spec(BASE))
    assert len(rows) == 2 * 2 * 3
    keys = [(r.scheme, r.U, r.value) for r in rows]
    assert keys == sorted(keys)
    assert all(r.ber_mc is not None for r in rows)


def test_two_axis_rows_sort_numerically():
    text = with_line("experiment", "axis2 = N\ngrid2 = 8, 16").replace("schemes = MH, MFH", "schemes = MH")
    rows = run_experiment(parse_spec(text.replace("trials = 2000", "trials = 0")))
    labels = list(dict.fromkeys(r.scheme for r in rows))
    assert labels == ["MH@N=8", "MH@N=16"]
    assert all(r.ber_mc is None for r in rows)


def test_one_row_table_is_two_lines(tmp_path):
    path = emit_csv([Row("MH", 1, "SNR_dB", 0.0, 0.25)], tmp_path / "one.csv")
    lines = path.read_text().splitlines()
    assert lines == [CSV_HEADER, "MH,1,SNR_dB,0.00000000000000000e+00,2.50000000000000000e-01,,"]


def test_empty_table_rejected(tmp_path):
    with pytest.raises(ValueError):
        emit_csv([], tmp_path / "none.csv")


def test_csv_round_trip_is_lossless(tmp_path):
    rows = run_experiment(parse_spec(BASE))
    path = emit_csv(rows, tmp_path / "t.csv")
    assert read_csv(path) == rows


def test_rerun_is_byte_identical(tmp_path):
    spec = parse_spec(BASE)
    a = format_csv(run_experiment(spec, threads=1))
    b = format_csv(run_experiment(spec, threads=4))
    assert a == b


def test_presets_load_and_validate():
    for preset in PRESETS:
        for path in preset_paths(preset):
            spec = load_spec(path)
            assert spec.csv.endswith(".csv")


def test_fig3_preset_rows_and_claims():
    (path,) = preset_paths("fig3")
    spec = load_spec(path)
    rows = run_experiment(spec.__class__(**{**spec.__dict__, "mc": None}))
    assert len(rows) == 3 * 3 * 31
    curves = {}
    for r in rows:
        curves.setdefault((r.scheme, r.U), []).append(r.ber_analytic)
    for U in (1, 2, 4):
        assert curves[("FH", U)] == curves[("MH", U)]
        assert all(a < b for a, b in zip(curves[("MFH", U)], curves[("MH", U)]))


def test_fig5_preset_increases_in_k_and_saturates():
    (path,) = preset_paths("fig5")
    spec = load_spec(path)
    rows = run_experiment(spec.__class__(**{**spec.__dict__, "mc": None}))
    for scheme in ("MH", "FH", "MFH"):
        for U in (1, 2, 4):
            ys = [r.ber_analytic for r in rows if r.scheme == scheme and r.U == U]
            assert all(a < b for a, b in zip(ys, ys[1:]))
            if scheme != "MFH":
                # with P = 1/10 the increments peak and then shrink; MFH (P = 1/50) is still climbing at K = 60
                steps = [b - a for a, b in zip(ys, ys[1:])]
                assert steps[-1] < 0.5 * max(steps)


@pytest.mark.parametrize("preset,scheme", [("fig8", "MH"), ("fig9", "MFH")])
def test_dpsk_below_fsk_presets(preset, scheme):
    (path,) = preset_paths(preset)
    spec = load_spec(path)
    rows = run_experiment(spec.__class__(**{**spec.__dict__, "mc": None}))
    table = {(r.scheme, r.U, r.value): r.ber_analytic for r in rows}
    for (label, U, value), ber in table.items():
        if label == f"{scheme}-DPSK" and value >= 5:
            assert ber < table[(f"{scheme}-FSK", U, value)]


# command line


def write(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "exp.cfg"
    path.write_text(text)
    return path


def test_cli_run_writes_csv(tmp_path, capsys):
    cfg = write(tmp_path, BASE)
    assert main(["run", str(cfg), "--out", str(tmp_path / "out")]) == 0
    first = (tmp_path / "out" / "small.csv").read_bytes()
    assert main(["run", str(cfg), "--out", str(tmp_path / "out"), "-q"]) == 0
    assert (tmp_path / "out" / "small.csv").read_bytes() == first


def test_cli_seed_override_changes_mc_only(tmp_path):
    cfg = write(tmp_path, BASE)
    main(["run", str(cfg), "--out", str(tmp_path / "a"), "-q"])
    main(["run", str(cfg), "--out", str(tmp_path / "b"), "--seed", "99", "-q"])
    a = read_csv(tmp_path / "a" / "small.csv")
    b = read_csv(tmp_path / "b" / "small.csv")
    assert [r.ber_analytic for r in a] == [r.ber_analytic for r in b]
    assert [r.ber_mc for r in a] != [r.ber_mc for r in b]


def test_cli_validate(tmp_path, capsys):
    assert main(["validate", str(write(tmp_path, BASE))]) == 0
    assert "12 rows" in capsys.readouterr().out


def test_cli_validation_error_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, BASE.replace("mu = DPSK", "mu = 2"))
    assert main(["validate", str(cfg)]) == 2
    assert "system.mu" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.cfg")]) == 2


def test_cli_numerical_diagnostic_exit_code(tmp_path, monkeypatch):
    import vortexhop.experiment as experiment

    monkeypatch.setattr(experiment, "average_ber", lambda system, scheme: math.nan)
    cfg = write(tmp_path, BASE.replace("trials = 2000", "trials = 0"))
    assert main(["run", str(cfg), "--out", str(tmp_path)]) == 3


def test_cli_figure_preset(tmp_path):
    assert main(["figure", "fig7", "--out", str(tmp_path), "--mc-trials", "0", "-q"]) == 0
    for name in ("fig7_5dB", "fig7_10dB"):
        rows = read_csv(tmp_path / f"{name}.csv")
        assert len(rows) == 10 * 10
        assert (tmp_path / f"{name}.png").stat().st_size > 0


def test_console_script_module_entry(tmp_path):
    cfg = write(tmp_path, BASE)
    proc = subprocess.run([sys.executable, "-m", "vortexhop.cli", "validate", str(cfg)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
