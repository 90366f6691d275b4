import csv
import io
import json
import math

import pytest

from collapse_heat import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
    return rows[0], [[float(v) for v in r] for r in rows[1:]]


def test_estimate_torlon_sphere(capsys):
    code, out, _ = run(capsys, "estimate", "--geometry", "sphere", "--L", "0.5m", "--material", "torlon-4203")
    assert code == 0
    assert "T_c = 5.4903e-02 K" in out
    assert "(L/r_C)^0.6289" in out


def test_estimate_copper_cube(capsys):
    code, out, _ = run(capsys, "estimate", "--geometry", "cube", "--L", "1m")
    assert code == 0
    assert "T_c = 4.6173e-04 K" in out


def test_estimate_accepts_units(capsys):
    _, a, _ = run(capsys, "estimate", "--L", "50cm", "--material", "torlon-4203", "--rc", "1e-5cm")
    _, b, _ = run(capsys, "estimate", "--L", "0.5", "--material", "torlon-4203")
    assert a.splitlines()[1] == b.splitlines()[1]


def test_estimate_profile_out(tmp_path, capsys):
    out = tmp_path / "p.csv"
    code, _, _ = run(capsys, "estimate", "--geometry", "slab", "--L", "1mm", "--out", str(out))
    assert code == 0
    header, rows = read_csv(out.read_text())
    assert header == ["position_m", "T_K"]
    assert len(rows) == 101
    assert rows[-1] == [1e-3, 0.0]


def test_solve_sphere(capsys, tmp_path):
    out = tmp_path / "field.csv"
    code, text, _ = run(capsys, "solve", "--geometry", "sphere", "--radius", "1m", "--resolution", "16",
                        "--out", str(out))
    assert code == 0
    assert "T_c = " in text
    meta = json.loads((tmp_path / "field.csv.json").read_text())
    assert meta["resolution"] == 16
    assert meta["geometry"] == {"kind": "Sphere", "radius": 1.0}


def test_scan_lambda_two_points(capsys):
    code, out, _ = run(capsys, "scan", "--geometry", "sphere", "--L", "0.5m", "--material", "torlon-4203",
                       "--scan", "lambda:1e-8:10^-7.7:2:log")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["lambda_per_s", "Q_W_m3", "T_c_K"]
    assert rows[0][0] == 1e-8
    assert rows[1][0] == pytest.approx(10**-7.7, rel=1e-8, abs=0)
    assert rows[0][2] == pytest.approx(5.49025051e-2, rel=1e-8, abs=0)
    assert rows[1][2] / rows[0][2] == pytest.approx(1.2426, rel=1e-4, abs=0)


def test_scan_single_point_and_two_axes(capsys):
    _, out, _ = run(capsys, "scan", "--scan", "L:1m:1m:1:lin")
    header, rows = read_csv(out)
    assert len(rows) == 1
    _, out, _ = run(capsys, "scan", "--scan", "L:1mm:1m:4:log", "--scan", "rc:1e-7:1e-6:2:log")
    header, rows = read_csv(out)
    assert header == ["L_m", "r_C_m", "Q_W_m3", "T_c_K"]
    assert len(rows) == 8
    # copper sphere: T_c grows like L, so one decade apart per L step
    T = [r[3] for r in rows if r[1] == 1e-7]
    for lo, hi in zip(T, T[1:]):
        assert hi / lo == pytest.approx(10.0, rel=1e-9, abs=0)


def test_scan_is_byte_identical(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert cli.main(["scan", "--L", "1m", "--scan", "lambda:1e-10:1e-6:9:log", "--out", str(p)]) == 0
    capsys.readouterr()
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_scan_grid(capsys):
    code, out, _ = run(capsys, "scan", "--grid", "--resolution", "8", "--scan", "L:1m:2m:2:lin")
    assert code == 0
    _, rows = read_csv(out)
    # grid scaling is exact for a linear-law material: T_c proportional to L
    assert rows[1][2] / rows[0][2] == pytest.approx(2.0, rel=1e-6, abs=0)


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('geometry = "sphere"\nL = "0.5m"\nmaterial = "torlon-4203"\nlambda = "10^-7.7"\n')
    _, out, _ = run(capsys, "estimate", "--config", str(cfg))
    assert "T_c = 6.8223e-02 K" in out
    _, out, _ = run(capsys, "estimate", "--config", str(cfg), "--lambda", "1e-8")
    assert "T_c = 5.4903e-02 K" in out
    cfg.write_text("colour = 3\n")
    code, _, err = run(capsys, "estimate", "--config", str(cfg))
    assert code == cli.EXIT_USAGE
    assert "colour" in err


def test_materials_env_var(tmp_path, capsys, monkeypatch):
    path = tmp_path / "m.toml"
    path.write_text("[rhodium]\nrho_kg_m3 = 12410\nk0_hat_SI = 30.0\nbeta = 1.0\nvalid_below_K = 10.0\n")
    monkeypatch.setenv(cli.MATERIALS_ENV, str(path))
    code, out, _ = run(capsys, "materials")
    assert code == 0
    assert len(out.strip().splitlines()) == 4
    code, out, _ = run(capsys, "estimate", "--material", "rhodium", "--geometry", "cube", "--L", "1m")
    assert code == 0


def test_constrain(capsys, tmp_path):
    out = tmp_path / "c.csv"
    code, text, _ = run(capsys, "constrain", "--out", str(out))
    assert code == 0
    assert text.count("no constraint") == 3
    assert "note:" in text
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    assert all(line.split(",")[4] == "false" for line in lines[1:])


@pytest.mark.parametrize(
    "argv, code",
    [
        (["estimate", "--geometry", "box", "--L", "1m"], cli.EXIT_USAGE),
        (["estimate", "--L", "1parsec"], cli.EXIT_USAGE),
        (["estimate", "--geometry", "sphere"], cli.EXIT_USAGE),
        (["estimate", "--geometry", "cube", "--L", "1m", "--material", "torlon-4203"], cli.EXIT_DOMAIN),
        (["estimate", "--L=-1m"], cli.EXIT_DOMAIN),
        (["estimate", "--L", "1m", "--material", "unobtainium"], cli.EXIT_MATERIAL),
        (["estimate", "--L", "1m", "--materials", "/nonexistent/m.toml"], cli.EXIT_MATERIAL),
        (["solve", "--L", "1m", "--resolution", "4"], cli.EXIT_DOMAIN),
        (["solve", "--L", "1m", "--resolution", "8", "--tol", "1e-30"], cli.EXIT_SOLVER),
        (["scan", "--scan", "mass:1:2:2:lin"], cli.EXIT_USAGE),
        (["scan", "--scan", "L:0:1:2:log"], cli.EXIT_USAGE),
        (["scan", "--scan", "L:1m:2m:2:lin", "--out", "/nonexistent/dir/x.csv"], cli.EXIT_OUTPUT),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_bad_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["frobnicate"])
    assert err.value.code == 2


@pytest.mark.parametrize(
    "text, value",
    [("50cm", 0.5), ("0.4mm", 4e-4), ("20um", 2e-5), ("2", 2.0), ("1e-5cm", 1e-7)],
)
def test_parse_length(text, value):
    assert cli.parse_length(text) == pytest.approx(value, rel=1e-14, abs=0)


def test_parse_rate():
    assert cli.parse_rate("10^-7.7") == 10**-7.7
    assert cli.parse_rate("10**-8") == 1e-8
    assert math.isclose(cli.parse_rate("1e-8"), 1e-8)
    with pytest.raises(cli.UsageError):
        cli.parse_rate("fast")
