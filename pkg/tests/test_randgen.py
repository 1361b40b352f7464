from __future__ import annotations

import numpy as np
import pytest
from scipy import stats

from spectra.randgen import RngState, UnitVector, as_state, chi, gaussian, sphere_vector, uniform


def test_same_state_same_stream():
    a = gaussian(RngState(7, 3, 11), "real", 1000)
    b = gaussian(RngState(7, 3, 11), "real", 1000)
    assert np.array_equal(a, b)


def test_copy_replays():
    s = RngState(5)
    c = s.copy()
    assert np.array_equal(gaussian(s, "real", 50), gaussian(c, "real", 50))


def test_distinct_streams_uncorrelated():
    root = RngState(1)
    x = gaussian(root.split(0), "real", 100_000)
    y = gaussian(root.split(1), "real", 100_000)
    assert abs(np.corrcoef(x, y)[0, 1]) < 0.01
    assert not np.array_equal(x[:10], y[:10])


def test_gaussian_moments():
    s = RngState(2)
    x = gaussian(s, "real", 1_000_000)
    assert abs(x.mean()) < 0.005
    assert abs(x.var() - 1) < 0.01
    z = gaussian(s, "complex", 1_000_000)
    assert abs(z.mean()) < 0.005
    assert abs(np.mean(np.abs(z) ** 2) - 1) < 0.01
    assert abs(z.real.var() - 0.5) < 0.01


def test_chi_conventions():
    s = RngState(3)
    t = chi(s, 5.0, 1_000_000)
    assert abs(np.mean(t ** 2) - 2.5) < 0.02
    c = chi(s, 5.0, 1_000_000, tilde=False)
    assert abs(np.mean(c ** 2) - 5.0) < 0.05


def test_chi_k2_is_exponential():
    x = chi(RngState(4), 2.0, 100_000) ** 2
    assert stats.kstest(x, "expon").statistic < 0.01


def test_chi_noninteger_shape():
    x = chi(RngState(4), 0.3, 200_000) ** 2
    assert abs(x.mean() - 0.15) < 0.005


def test_chi_rejects_nonpositive():
    with pytest.raises(ValueError):
        chi(RngState(0), 0.0, 3)
    with pytest.raises(ValueError):
        chi(RngState(0), -1.0)


def test_sphere_vector_norm_and_moments():
    s = RngState(5)
    for kind in ("real", "complex"):
        v = sphere_vector(s, 17, kind)
        assert abs(np.linalg.norm(v.entries) - 1) < 1e-14
    sq = np.array([sphere_vector(s, 10).entries ** 2 for _ in range(100_000)])
    assert np.all(np.abs(sq.mean(axis=0) - 0.1) < 0.003)


def test_sphere_vector_degenerate_and_errors():
    v = sphere_vector(RngState(6), 1)
    assert v.entries[0] in (1.0, -1.0)
    with pytest.raises(ValueError):
        sphere_vector(RngState(6), 0)
    with pytest.raises(ValueError):
        UnitVector(np.array([1.0, 1.0]))


def test_uniform_range_and_as_state():
    u = uniform(as_state(9), 1000)
    assert u.min() >= 0 and u.max() < 1
    assert isinstance(as_state(None), RngState)
