import csv
import io
import json
import os
import subprocess
import sys

import pytest

from osc_circle.cli import Axis, UsageError, format_value, read_config, run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def test_spectrum_csv():
    code, out = call("spectrum", "--lambda", "0", "--levels", "3")
    assert code == 0
    assert out == "lambda,n,energy\n0.0,0,0.5\n0.0,1,1.5\n0.0,2,2.5\n"


def test_spectrum_json():
    code, out = call("spectrum", "--lambda", "1", "--levels", "2", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and rows[0]["energy"] == pytest.approx(0.8090169943749474)


def test_state_json_round_trip():
    from osc_circle.states import StateVector
    code, out = call("state", "--lambda", "0.5", "--z", "1.2", "--format", "json")
    assert code == 0
    s = StateVector.from_json(out)
    assert s.z == 1.2 and abs(sum(s.probabilities) - 1) < 1e-13


def test_stats_and_squeeze():
    code, out = call("stats", "--lambda", "0.5", "--z", "3")
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(row["mandel_q"]) == pytest.approx(-0.30694452850006345, rel=1e-11)
    code, out = call("squeeze", "--lambda", "0.5", "--z", "1.5", "--phi", "0,1.5707963267948966")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert float(rows[0]["s1"]) == pytest.approx(-0.16680885470648243, rel=1e-10)


def test_scan_axis_forms():
    code, out = call("scan", "--lambda", "0.1:1:3", "--z", "1,2", "--phi", "0", "--pcount", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 6
    assert list(rows[0]) == ["lambda", "z", "phi", "n_max", "mean_n", "var_n", "mandel_q", "s1", "s2", "p0", "p1"]


def test_axis_parse():
    assert Axis.parse("2", "x").values == (2.0,)
    assert Axis.parse("1:100:3:log", "x").values == pytest.approx((1.0, 10.0, 100.0))
    for bad in ("a", "1:0:3", "1:2", "0:1:3:log", "nan", "1:2:3:cubic"):
        with pytest.raises(UsageError):
            Axis.parse(bad, "x")


def test_format_value_round_trips():
    assert format_value(0.1) == "0.1"
    assert float(format_value(1 / 3)) == 1 / 3
    assert format_value(True) == "true"


def test_verify_passes(tmp_path):
    code, out = call("verify", "--lambda", "0.5,1", "--levels", "4", "--grid", "1000", "--nmax", "6")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert len(report["moments"]) == 2 and len(report["spectrum"]) == 2


def test_verify_failure_exit_code():
    code, out = call("verify", "--spectrum", "--lambda", "1", "--tol", "1e-30", "--grid", "400", "--levels", "3")
    assert code == 1 and not json.loads(out)["passed"]
    code, out = call("verify", "--moments", "--lambda", "1", "--rho-mode", "paper")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["spectrum", "--lambda", "-1"],
    ["state", "--z", "-2"],
    ["state", "--epsilon", "2"],
    ["state", "--lambda", "0,1"],
    ["verify", "--nmax", "13"],
    ["bogus"],
    [],
    ["stats", "--levels", "x", "--z", "1,2"],
])
def test_usage_errors(argv):
    assert call(*argv)[0] == 2


def test_missing_config_is_io_error(tmp_path):
    assert call("--config", str(tmp_path / "nope.cfg"))[0] == 3
    assert call("spectrum", "--output", str(tmp_path / "missing" / "x.csv"))[0] == 3


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "a.cfg"
    cfg.write_text("# comment\ncommand = spectrum\nlambda = 0\nlevels = 5  # trailing\n")
    code, out = call("--config", str(cfg), "--levels", "2")
    assert code == 0 and out.count("\n") == 3
    cfg.write_text("colour = red\n")
    assert call("--config", str(cfg))[0] == 2


def test_bundled_configs_resolve():
    for name in ("fig2.cfg", "fig3.cfg", "fig4.cfg"):
        assert read_config(name)["command"] == "scan"


def test_output_file(tmp_path):
    path = tmp_path / "s.csv"
    code, out = call("spectrum", "--levels", "2", "--output", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("lambda,n,energy\n")


def test_console_entry_point(tmp_path):
    env = dict(os.environ, OSC_CIRCLE_THREADS="2")
    proc = subprocess.run([sys.executable, "-m", "osc_circle", "spectrum", "--levels", "1", "--lambda", "0"],
                          capture_output=True, text=True, env=env, cwd=tmp_path)
    assert proc.returncode == 0 and proc.stdout == "lambda,n,energy\n0.0,0,0.5\n"
