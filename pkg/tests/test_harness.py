import csv
import json
import os
import stat
from math import sqrt
from pathlib import Path

import numpy as np
import pytest

from anticonc.harness import (ConfigError, format_value, main, parse_config, run)
from anticonc.randmat import trial_seed
from harness_configs import CONFIGS

GOLDEN = Path(__file__).parent / "golden"


def _run(cmd, conf, out, seed=7):
    cfg = parse_config(json.dumps(conf), cmd, {"out": str(out), "seed": seed})
    return run(cfg)


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_minimal_smallball_config_gets_defaults():
    cfg = parse_config('{"a": [1, 2, 3], "eps": 0.5, "family": "rademacher"}', "smallball")
    assert cfg.command == "smallball" and cfg["eps"] == [0.5]
    assert cfg["method"] == "exact" and cfg["budget"] == 2 ** 26
    echo = cfg.echo()
    assert echo["a"] == [1.0, 2.0, 3.0] and echo["seed"] == 0


def test_alpha_out_of_range():
    with pytest.raises(ConfigError) as exc:
        parse_config('{"a": [1, 2], "alpha": 1.5}', "lcd")
    assert "alpha must be in (0,1)" in exc.value.errors


def test_duplicate_key_named():
    with pytest.raises(ConfigError) as exc:
        parse_config('{"a": [1], "alpha": 0.1, "alpha": 0.2}', "lcd")
    assert any("'alpha'" in e and "duplicate" in e for e in exc.value.errors)


def test_all_errors_reported():
    with pytest.raises(ConfigError) as exc:
        parse_config('{"bogus": 1, "alpha": 2, "trials": 0}', "normal-lcd")
    errs = exc.value.errors
    assert any(e.startswith("bogus") for e in errs)
    assert any(e.startswith("alpha") for e in errs)
    assert any(e.startswith("trials") for e in errs)
    assert any(e.startswith("n: missing") for e in errs)


def test_key_valid_elsewhere_rejected_for_command():
    with pytest.raises(ConfigError, match="eps: unknown key"):
        parse_config('{"n": 3, "eps": [0.1]}', "singularity")


def test_flags_override_file(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"n": 4, "trials": 50, "seed": 1}))
    out = tmp_path / "o"
    assert main(["singularity", "--config", str(conf), "--trials", "30", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["config"]["trials"] == 30 and summary["config"]["n"] == 4
    assert summary["config"]["seed"] == 1


def test_format_value():
    assert format_value(None) == "NA" and format_value(float("nan")) == "NA"
    assert format_value(0.1) == "0.10000000000000001"
    assert float(format_value(np.float64(1 / 3))) == 1 / 3
    assert format_value(True) == "1" and format_value(12) == "12"


@pytest.mark.parametrize("cmd", sorted(CONFIGS))
def test_golden_schema_and_determinism(cmd, tmp_path):
    assert _run(cmd, CONFIGS[cmd], tmp_path / "a") == 0
    assert _run(cmd, CONFIGS[cmd], tmp_path / "b") == 0
    a = (tmp_path / "a" / "report.csv").read_bytes()
    assert a == (tmp_path / "b" / "report.csv").read_bytes()
    header, plot_header = (GOLDEN / f"{cmd}.schema").read_text().split("\n")[:2]
    assert a.split(b"\r\n")[0].decode() == header
    assert a.endswith(b"\r\n") and b"\n" not in a.replace(b"\r\n", b"")
    plot = tmp_path / "a" / "plot.dat"
    assert plot.exists() == bool(plot_header)
    if plot_header:
        lines = plot.read_text().splitlines()
        assert lines[1] == plot_header
        width = len(plot_header.split()) - 1
        assert all(len(l.split()) == width for l in lines[2:])
    sa = json.loads((tmp_path / "a" / "summary.json").read_text())
    sb = json.loads((tmp_path / "b" / "summary.json").read_text())
    assert sa["version"] and sa["wall_time_s"] >= 0
    for s in (sa, sb):
        del s["wall_time_s"], s["config"]["out"]
    assert sa == sb
    # every parameter echoed
    for k, v in CONFIGS[cmd].items():
        assert sa["config"][k] == v or sa["config"][k] == [float(x) for x in v]
    rows = _rows(tmp_path / "a" / "report.csv")
    assert all(v != "" for r in rows for v in r.values())


def test_matrix_tail_summary_recomputable(tmp_path):
    conf = CONFIGS["matrix-tail"]
    _run("matrix-tail", conf, tmp_path)
    rows = _rows(tmp_path / "report.csv")
    summary = json.loads((tmp_path / "summary.json").read_text())["summary"]
    scaled = np.array([float(r["s_min_scaled"]) for r in rows])
    assert summary["counts"] == [int(np.sum(scaled <= e)) for e in conf["eps"]]
    assert summary["mean_s_min_scaled"] == pytest.approx(scaled.mean(), rel=1e-15)
    assert [int(r["seed"]) for r in rows] == [trial_seed(7, "matrix-tail", i) for i in range(len(rows))]
    np.testing.assert_allclose([float(r["s_min"]) * sqrt(20) for r in rows], scaled, rtol=1e-15)


def test_singularity_summary_recomputable(tmp_path):
    _run("singularity", CONFIGS["singularity"], tmp_path)
    rows = _rows(tmp_path / "report.csv")
    summary = json.loads((tmp_path / "summary.json").read_text())["summary"]
    assert summary["singular"] == sum(int(r["singular"]) for r in rows)
    assert all((int(r["det"]) == 0) == (r["singular"] == "1") for r in rows)
    assert summary["exact"] == "5/8"


def test_normal_lcd_na_token(tmp_path):
    conf = {"n": 12, "trials": 10, "family": "gaussian", "alpha": 0.05, "beta": 0.05, "t_max": 2}
    _run("normal-lcd", conf, tmp_path)
    rows = _rows(tmp_path / "report.csv")
    censored = [r for r in rows if r["status"] == "not_found"]
    assert censored and all(r["D"] == "NA" and float(r["D_censored"]) == 2 for r in censored)


def test_capacity_exit(tmp_path):
    rc = main(["smallball", "--a", ",".join(["1"] * 30), "--eps", "1", "--out", str(tmp_path)])
    assert rc == 3


def test_config_error_exit(tmp_path, capsys):
    assert main(["lcd", "--a", "1,2", "--alpha", "1.5", "--out", str(tmp_path)]) == 2
    assert "alpha must be in (0,1)" in capsys.readouterr().err


@pytest.mark.skipif(hasattr(os, "geteuid") and os.geteuid() == 0, reason="root ignores permissions")
def test_unwritable_output_exit(tmp_path):
    locked = tmp_path / "locked"
    locked.mkdir()
    locked.chmod(stat.S_IRUSR | stat.S_IXUSR)
    assert main(["lcd", "--a", "1,2", "--out", str(locked)]) == 4


def test_output_path_is_a_file_exit(tmp_path):
    f = tmp_path / "file"
    f.write_text("x")
    assert main(["lcd", "--a", "1,2", "--out", str(f)]) == 4


def test_module_entry_point(tmp_path):
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "anticonc", "lcd", "--a", "1,0.5", "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert json.loads((tmp_path / "summary.json").read_text())["summary"]["D"] == pytest.approx(1.9)
