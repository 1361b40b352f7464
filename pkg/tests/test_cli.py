from __future__ import annotations

import json
import subprocess
import sys

import numpy as np

from spectra.cli import main
from spectra.verify import read_csv, read_report


def test_sample_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sample", "--ensemble", "gaussian", "--n", "5", "--alpha", "1.5", "--beta", "1",
                 "--reps", "3", "--seed", "2", "--out", str(out)]) == 0
    head, body = read_csv(out)
    assert body.shape == (3, 6)
    again = tmp_path / "t.csv"
    main(["sample", "--ensemble", "gaussian", "--n", "5", "--alpha", "1.5", "--beta", "1",
          "--reps", "3", "--seed", "2", "--out", str(again)])
    assert out.read_bytes() == again.read_bytes()


def test_sample_complex_columns(tmp_path):
    out = tmp_path / "z.csv"
    assert main(["sample", "--ensemble", "antiherm", "--n", "3", "--alpha", "0.7", "--out", str(out)]) == 0
    head, body = read_csv(out)
    assert head == ["index", "re_1", "im_1", "re_2", "im_2", "re_3", "im_3"]
    assert abs(body[0, 2::2].sum() - 0.7) < 1e-9


def test_theory_json(capsys):
    assert main(["theory", "--quantity", "outlier", "--params", "coupling=1.5"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert abs(d["value"]["location"] - 5 / 3) < 1e-14
    assert main(["theory", "--quantity", "tw-cdf", "--params", "beta=2,s=-2"]) == 0
    assert 0.4 < json.loads(capsys.readouterr().out)["value"] < 0.45


def test_theory_bad_input(capsys):
    assert main(["theory", "--quantity", "outlier", "--params", "gamma=2"]) == 2
    assert "coupling" in capsys.readouterr().err
    assert main(["theory", "--quantity", "rho-profile", "--params", "g=0.5,Y=1"]) == 2


def test_verify_exit_codes(tmp_path, capsys):
    assert main(["verify", "--suite", "F4", "--n", "6", "--reps", "5", "--out", str(tmp_path / "f4")]) == 0
    assert capsys.readouterr().out.startswith("PASS F4")
    assert read_report(tmp_path / "f4.json").passed
    # an impossible tolerance makes the report fail and the exit code nonzero
    assert main(["verify", "--suite", "F3", "--n", "30", "--reps", "20", "--param", "tol=1e-12"]) == 1
    assert main(["verify", "--suite", "nope"]) == 2
    assert main(["verify", "--list"]) == 0
    assert "F4.3" in capsys.readouterr().out


def test_sweep(tmp_path, capsys):
    assert main(["sweep", "--model", "subunitary", "--grid", "1:0.1:-0.1", "--n", "4", "--seed", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("grid_value,re_1,im_1")
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert rows.shape == (10, 2 + 8)
    mod = np.hypot(rows[:, 1:-1:2], rows[:, 2:-1:2])
    assert np.abs(mod.prod(axis=1) - rows[:, 0]).max() < 1e-9
    assert main(["sweep", "--model", "antiherm", "--grid", "0:1:-0.1", "--n", "4"]) == 2


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "spectra.cli", "theory", "--quantity", "bulk-density",
                        "--params", "x=0"], capture_output=True, text=True)
    assert r.returncode == 0
    assert abs(json.loads(r.stdout)["value"] - 2 / np.pi) < 1e-15
