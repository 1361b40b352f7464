from __future__ import annotations

import json
import math

import numpy as np
import pytest
from scipy import stats

from spectra.verify import (
    SUITES,
    ExperimentConfig,
    Histogram,
    ResourceLimitExceeded,
    VerificationReport,
    emit,
    ks_2samp,
    ks_test,
    read_csv,
    read_report,
    run_suite,
)
from spectra.verify.report import REPORT_FIELDS


def test_ks_self_consistency():
    fails = 0
    for seed in range(20):
        x = np.random.default_rng(seed).standard_normal(10_000)
        fails += ks_test(x, stats.norm.cdf) >= 0.02
    assert fails == 0


def test_ks_point_mass_and_errors():
    assert ks_test(np.full(100, 0.3), stats.norm.cdf) >= 0.5
    with pytest.raises(ValueError):
        ks_test(np.arange(5.0), stats.norm.cdf)
    with pytest.raises(ValueError):
        ks_test(np.linspace(-1, 1, 50), lambda t: 1 - stats.norm.cdf(t))
    x = np.sort(np.random.default_rng(0).standard_normal(200))
    assert np.all(np.diff(stats.norm.cdf(x)) >= 0)
    assert ks_2samp(np.arange(20.0), np.arange(20.0)) == 0.0


def test_histogram():
    h = Histogram.from_samples([0.1, 0.2, 0.7, 1.5], bins=2, range=(0, 1))
    assert list(h.counts) == [2, 1] and h.total == 3
    assert np.allclose(h.centers, [0.25, 0.75])
    assert np.allclose(h.density(4), [1.0, 0.5])
    with pytest.raises(ValueError):
        Histogram([0, 1, 1], [1, 1], 2)
    with pytest.raises(ValueError):
        Histogram([0, 1, 2], [1, 1], 3)


def test_config_validation():
    with pytest.raises(KeyError):
        ExperimentConfig("nope")
    with pytest.raises(ValueError):
        ExperimentConfig("F3", reps=0)
    assert ExperimentConfig("F3", params={"alpha": 2}).params == {"alpha": 2.0}


def test_report_pass_flag():
    r = VerificationReport("F3", {}, "ks", 0.01, 0.02)
    assert r.passed
    assert not VerificationReport("F3", {}, "ks", math.nan, 0.02).passed
    assert not VerificationReport("F3", {}, "ks", 0.03, 0.02).passed
    with pytest.raises(ValueError):
        VerificationReport("F3", {}, "pvalue", 0.1, 0.2)
    d = r.to_dict()
    d["pass"] = False
    with pytest.raises(ValueError):
        VerificationReport.from_dict(d)


def test_emit_csv_round_trip(tmp_path):
    g = np.random.default_rng(1)
    x = g.standard_normal((4, 5)) * 10.0 ** g.integers(-300, 300, (4, 5))
    p = tmp_path / "a.csv"
    emit(x, "csv", p)
    head, body = read_csv(p)
    assert head == ["index"] + [f"x_{j}" for j in range(1, 6)]
    assert np.array_equal(body[:, 1:], x)


def test_emit_complex_columns(tmp_path):
    z = np.array([1 + 2j, -0.5 + 1e-17j, 3.25 - 1j])
    p = tmp_path / "c.csv"
    emit(z, "csv", p)
    head, body = read_csv(p)
    assert head == ["index", "re_1", "im_1", "re_2", "im_2", "re_3", "im_3"]
    assert body.shape == (1, 7)
    assert np.array_equal(body[0, 1::2] + 1j * body[0, 2::2], z)
    emit({"a": [1.0, 2.0], "z": [1j, 2 + 0j]}, "csv", p)
    assert read_csv(p)[0] == ["a", "z_re", "z_im"]
    with pytest.raises(ValueError):
        emit({"a": [1.0], "b": [1.0, 2.0]}, "csv", p)


def test_emit_json_schema(tmp_path):
    r = VerificationReport("F3", {"N": 10, "alpha": np.float64(1.5)}, "abs_error", 0.01, 0.05, 1.25)
    p = tmp_path / "r.json"
    emit(r, "json", p)
    d = json.loads(p.read_text())
    assert tuple(d) == REPORT_FIELDS
    assert isinstance(d["pass"], bool) and d["pass"]
    assert read_report(p).to_dict() == r.to_dict()
    with pytest.raises(TypeError):
        emit({"a": [1]}, "json", p)
    with pytest.raises(ValueError):
        emit(r, "xml", p)


def test_emit_unwritable_path(tmp_path):
    bad = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match="missing"):
        emit(np.ones(3), "csv", bad)


def test_run_suite_f3_example(tmp_path):
    rep = run_suite("F3", ExperimentConfig("F3", N=100, reps=200, params={"alpha": 1.5}, output_path=str(tmp_path)))
    assert rep.passed
    assert abs(rep.params["mean_largest"] - 5 / 3) < 0.05
    assert (tmp_path / "F3.csv").exists() and (tmp_path / "F3.json").exists()


def test_run_suite_f4_example():
    rep = run_suite("F4", ExperimentConfig("F4", N=10, reps=20, params={"steps": 15}))
    assert rep.passed and rep.statistic_value < 1e-9


def test_determinism_and_parallel_merge(tmp_path):
    blobs = []
    for i, workers in enumerate((1, 1, 2)):
        out = tmp_path / f"run{i}"
        run_suite("F3", ExperimentConfig("F3", N=40, reps=60, seed=7, params={"workers": workers},
                                         output_path=str(out)))
        blobs.append(out.with_suffix(".csv").read_bytes())
    assert blobs[0] == blobs[1] == blobs[2]
    other = tmp_path / "other"
    run_suite("F3", ExperimentConfig("F3", N=40, reps=60, seed=8, output_path=str(other)))
    assert other.with_suffix(".csv").read_bytes() != blobs[0]


def test_unknown_suite_and_cap():
    with pytest.raises(KeyError):
        run_suite("F99")
    with pytest.raises(ResourceLimitExceeded):
        run_suite("F3", ExperimentConfig("F3", N=100, reps=400, params={"max_seconds": 1e-3}))


def test_suite_registry_covers_figures():
    for name in ("F1", "F3", "F3a", "F4", "F2.5", "F5", "F3.1", "F4.3", "F4.4", "F4.5"):
        assert name in SUITES


@pytest.mark.parametrize("name", ["F4.4", "F4.5", "F1"])
def test_cheap_figure_suites_pass(name):
    assert run_suite(name).passed
