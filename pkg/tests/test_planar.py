from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate, special, stats

from spectra import planar
from spectra.randgen import RngState


def test_params_g():
    assert planar.PlanarParams(1.0).profile_g == 1.0
    for a in (0.3, 2.0, 7.0):
        p = planar.PlanarParams(a)
        assert p.profile_g > 1
        assert p.profile_g == pytest.approx(planar.PlanarParams(1 / a).profile_g, abs=1e-14)
    with pytest.raises(ValueError):
        planar.PlanarParams(0.0)


# --- Bessel


def test_bessel_values():
    assert planar.bessel_i0(0.0) == 1.0
    assert abs(planar.bessel_i0(1.0) - 1.26606587775) < 1e-10
    z = np.concatenate([np.linspace(0, 25, 101), np.linspace(25.01, 400, 50)])
    for nu, ref in ((0, special.i0e), (1, special.i1e)):
        assert np.abs(planar.bessel_ie(nu, z) / np.maximum(ref(z), 1e-300) - 1)[1:].max() < 1e-12
    with pytest.raises(ValueError):
        planar.bessel_ie(2, 1.0)
    with pytest.raises(ValueError):
        planar.bessel_ie(0, -1.0)


# --- profile and kernel


def _rho_direct(g, Y):
    # brute force from the closed form, no series
    return math.exp(-2 * g * Y) * (g * math.sinh(2 * Y) / Y
                                   - (2 * Y * math.cosh(2 * Y) - math.sinh(2 * Y)) / (2 * Y * Y))


@pytest.mark.parametrize("g", [1.25, 2.5])
def test_rho_origin_and_normalization(g):
    assert planar.rho_profile(g, 0.0) == pytest.approx(2 * g, abs=1e-14)
    # the first-order correction is -4g^2 Y
    assert abs(_rho_direct(g, 1e-6) - 2 * g) < 1e-4
    for Y in (0.05, 0.0999, 0.1, 0.5, 3.0):
        assert planar.rho_profile(g, Y) == pytest.approx(_rho_direct(g, Y), rel=1e-12)
    tot, _ = integrate.quad(lambda y: planar.rho_profile(g, y), 0, np.inf, epsabs=1e-13, epsrel=1e-12)
    assert abs(tot - 1) < 1e-8
    assert np.all(planar.rho_profile(g, np.linspace(0, 20, 401)) >= 0)


def test_rho_large_y_exponent():
    # the algebraic prefactor drifts the ratio by log(Y)/Y, so take the largest Y without underflow
    for g, Y in ((2.5, 230.0), (4.0, 115.0)):
        slope = math.log(planar.rho_profile(g, Y)) / Y
        assert abs(slope / (-2 * g + 2) - 1) < 0.01


def test_rho_errors():
    with pytest.raises(ValueError):
        planar.rho_profile(1.0, 0.5)
    with pytest.raises(ValueError):
        planar.rho_profile(1.5, -0.1)


def _kernel_quad(g, Z1, Z2):
    w = Z1 - np.conj(Z2)
    re = integrate.quad(lambda s: ((g + s) * np.exp(1j * s * w)).real, -1, 1, epsabs=1e-14)[0]
    im = integrate.quad(lambda s: ((g + s) * np.exp(1j * s * w)).imag, -1, 1, epsabs=1e-14)[0]
    return math.exp(-g * (Z1.imag + Z2.imag)) * (re + 1j * im)


def test_kernel_against_quadrature():
    g = 1.25
    pts = [(0.3 + 0.2j, -0.1 + 0.5j), (5.0 + 0.1j, -4.0 + 0.3j), (1.0 + 2j, 0.5 + 3j), (20.0 + 0.5j, 0.2j)]
    for Z1, Z2 in pts:
        assert abs(planar.kernel_planar(g, Z1, Z2) - _kernel_quad(g, Z1, Z2)) < 1e-12


def test_kernel_diagonal_is_profile():
    for g in (1.25, 2.5):
        Y = np.array([0.0, 1e-3, 0.3, 1.0, 4.0, 6.0])
        for X in (0.0, 3.7):
            d = planar.kernel_planar(g, X + 1j * Y, X + 1j * Y)
            assert np.abs(d - planar.rho_profile(g, Y)).max() < 1e-10


def test_kernel_hermitian_and_normalized():
    g = 2.5
    Z1, Z2 = 0.4 + 0.7j, -1.1 + 0.2j
    assert abs(planar.kernel_planar(g, Z1, Z2) - np.conj(planar.kernel_planar(g, Z2, Z1))) < 1e-14
    assert abs(planar.kernel_planar(g, Z1, Z2, normalized=True) * math.pi - planar.kernel_planar(g, Z1, Z2)) < 1e-14
    with pytest.raises(ValueError):
        planar.kernel_planar(g, 0.1 - 0.1j, 0.0)


def test_kernel_sine_limit():
    g = 1e6
    X = np.linspace(0.3, 6.0, 20)
    ratio = planar.kernel_planar(g, X + 0j, 0j).real / (np.sin(X) / (np.pi * X))
    assert np.ptp(ratio) / ratio.mean() < 1e-5


def test_kernel_reproducing_one_point():
    from spectra.verify.suites import reproducing_integral

    g, Z1, Z3 = 1.25, 0.3 + 0.2j, -0.1 + 0.5j
    lhs = reproducing_integral(g, Z1, Z3, L=600.0)
    rhs = planar.kernel_planar(g, Z1, Z3, normalized=True)
    assert abs(lhs - rhs) < 1e-6


# --- overlaps


def _mean_overlap_fd(g, Y, h=1e-4):
    F = lambda y: math.exp(2 * g * y) * math.sinh(2 * y) / (2 * y)
    c = [1 / 12, -2 / 3, 0, 2 / 3, -1 / 12]
    return math.exp(-4 * g * Y) * sum(ck * F(Y + (k - 2) * h) for k, ck in enumerate(c)) / h


def test_mean_overlap_values():
    for g in (1.25, 2.5):
        assert planar.mean_overlap(g, 0.0) == pytest.approx(2 * g, abs=1e-14)
        assert planar.mean_overlap(g, 0.0) == pytest.approx(planar.rho_profile(g, 0.0), abs=1e-14)
        for Y in (0.05, 0.5, 2.0):
            assert abs(planar.mean_overlap(g, Y) - _mean_overlap_fd(g, Y)) < 1e-9
        Y = np.linspace(0, 10, 201)
        assert np.all(planar.mean_overlap(g, Y) >= planar.rho_profile(g, Y))


def _overlap_pdf_fd(g, Y, t, h=1e-3):
    # the differential operator applied by finite differences to an independent inner function
    f = lambda y: y * y * math.exp(-2 * g * y * (1 + 2 / t)) * special.i0(4 * y / t * math.sqrt((g * g - 1) * (1 + t)))
    c1 = [1 / 12, -2 / 3, 0, 2 / 3, -1 / 12]
    c2 = [-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12]
    v = [f(Y + (k - 2) * h) for k in range(5)]
    d1 = sum(a * b for a, b in zip(c1, v)) / h
    d2 = sum(a * b for a, b in zip(c2, v)) / h ** 2
    S = math.sinh(2 * Y) / (2 * Y)
    L = (1 + S * S) * v[2] + (1 - math.sinh(4 * Y) / (4 * Y)) / (2 * Y) * d1 + 0.25 * (S * S - 1) * d2
    return 16 / t ** 3 * math.exp(-2 * g * Y) * L


def test_overlap_pdf_against_finite_differences():
    for g, Y, t in ((1.25, 0.5, 0.3), (1.25, 1.0, 5.0), (2.5, 0.2, 50.0), (2.5, 2.0, 1.0)):
        ref = _overlap_pdf_fd(g, Y, t)
        assert abs(planar.overlap_pdf(g, Y, t) - ref) < 1e-6 * max(abs(ref), 1e-3)


def test_overlap_pdf_tail_and_moment():
    from spectra.verify.suites import overlap_tail_checks

    for g, Y in ((1.25, 0.5), (2.5, 1.0)):
        a = 1e3 ** 3 * planar.overlap_pdf(g, Y, 1e3)
        b = 1e4 ** 3 * planar.overlap_pdf(g, Y, 1e4)
        assert abs(a / b - 1) < 0.01
        t = np.logspace(-3, 4, 300)
        assert np.all(planar.overlap_pdf(g, Y, t) >= 0)
    for key, v in overlap_tail_checks().items():
        assert v < (0.01 if key.startswith("plateau") else 0.02), key


def test_overlap_pdf_errors():
    with pytest.raises(ValueError):
        planar.overlap_pdf(1.25, 0.0, 1.0)
    with pytest.raises(ValueError):
        planar.overlap_pdf(1.25, 0.5, 0.0)


# --- truncated unitary correlations


def _haar(g, N):
    Z = (g.standard_normal((N, N)) + 1j * g.standard_normal((N, N))) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / abs(d))


def test_cue_finite_n2_uniform_disk():
    z = np.array([0.1, 0.5j, -0.7 + 0.2j])
    assert np.abs(planar.cue_density("finite", z, N=2, a=0.0, k=1) - 1 / math.pi).max() < 1e-14
    # Monte Carlo: the nonzero eigenvalue of U diag(0, 1), chi-square on equal-area radial bins
    g = np.random.default_rng(11)
    r2 = []
    for _ in range(4000):
        U = _haar(g, 2)
        U[:, 0] = 0
        e = np.linalg.eigvals(U)
        r2.append(np.abs(e[np.argmax(np.abs(e))]) ** 2)
    counts = np.histogram(r2, bins=np.linspace(0, 1, 11))[0]
    assert stats.chisquare(counts).pvalue > 1e-3


def test_cue_finite_a0_determinantal():
    # at a = 0 the truncation of a Haar matrix is determinantal with kernel sum_{n<N-1} (n+1)(z conj w)^n / pi
    def K(z, w, N):
        n = np.arange(N - 1)
        return np.sum((n + 1) * (z * np.conj(w)) ** n) / math.pi

    for N in (3, 6):
        for z1, z2 in ((0.5, 0.3j), (0.2 + 0.1j, -0.6)):
            assert abs(planar.cue_density("finite", [z1], N=N) - K(z1, z1, N).real) < 1e-13
            det = (K(z1, z1, N) * K(z2, z2, N) - abs(K(z1, z2, N)) ** 2).real
            assert abs(planar.cue_density("finite", [z1, z2], N=N) - det) < 1e-13


def test_cue_finite_nonzero_a_monte_carlo():
    N, a, reps = 3, 0.3, 20000
    g = np.random.default_rng(5)
    r = np.empty((reps, N))
    for i in range(reps):
        U = _haar(g, N)
        U[:, 0] *= a
        r[i] = np.abs(np.linalg.eigvals(U))
    x, w = np.polynomial.legendre.leggauss(24)
    for lo, hi in ((0.3, 0.5), (0.5, 0.7), (0.7, 0.9), (0.9, 0.999)):
        rr = lo + (hi - lo) * (x + 1) / 2
        mass = (hi - lo) / 2 * np.sum(w * 2 * np.pi * rr * planar.cue_density("finite", rr + 0j, N=N, a=a, k=1))
        mc = np.sum((r > lo) & (r < hi)) / reps
        assert abs(mc - mass) < 0.03
    # ordered pairs with |z1| in A1 and |z2| in A2, integrated over radii and relative angle
    A1, A2 = (0.6, 0.8), (0.8, 0.95)
    cnt = sum(np.sum((r[:, i] > A1[0]) & (r[:, i] < A1[1]) & (r[:, j] > A2[0]) & (r[:, j] < A2[1]))
              for i in range(N) for j in range(N) if i != j) / reps
    x, w = np.polynomial.legendre.leggauss(12)
    ph = np.linspace(0, 2 * np.pi, 32, endpoint=False)
    tot = 0.0
    for x1, w1 in zip(x, w):
        r1 = A1[0] + (A1[1] - A1[0]) * (x1 + 1) / 2
        for x2, w2 in zip(x, w):
            r2 = A2[0] + (A2[1] - A2[0]) * (x2 + 1) / 2
            v = np.mean([planar.cue_density("finite", [r1, r2 * np.exp(1j * p)], N=N, a=a) for p in ph])
            tot += w1 * w2 * (A1[1] - A1[0]) * (A2[1] - A2[0]) / 4 * r1 * r2 * (2 * np.pi) ** 2 * v
    assert abs(cnt - tot) < 0.02


def test_cue_kac_and_limits():
    for z in (0.0, 0.5, 0.3 + 0.6j):
        assert planar.cue_density("kac", [z]) == pytest.approx(1 / (math.pi * (1 - abs(z) ** 2) ** 2), rel=1e-14)
    assert abs(planar.cue_density("finite", [0.5], N=200) / planar.cue_density("kac", [0.5]) - 1) < 1e-12
    s = planar.cue_density("scaled", [0.5], mu=1e3)
    assert abs(s / planar.cue_density("kac", [0.5]) - 1) < 1e-3
    z2 = [0.5, -0.2 + 0.3j]
    assert abs(planar.cue_density("scaled", z2, mu=1e3) / planar.cue_density("kac", z2) - 1) < 1e-3


def test_cue_errors():
    with pytest.raises(ValueError):
        planar.cue_density("finite", [0.1], N=4, a=0.5)
    with pytest.raises(ValueError):
        planar.cue_density("kac", [1.0])
    with pytest.raises(ValueError):
        planar.cue_density("kac", [0.1, 0.2, 0.3])
    with pytest.raises(ValueError):
        planar.cue_density("bogus", [0.1])
    with pytest.raises(ValueError):
        planar.cue_density("scaled", [0.1])


# --- Laurent zeros


def test_laurent_origin_zero_when_mu_infinite():
    for seed in range(5):
        zs = planar.laurent_zeros(RngState(seed), math.inf, M=60).zeros
        assert np.abs(zs).min() < 1e-12


def test_laurent_truncation_stability():
    a = planar.laurent_zeros(RngState(3), 1.0, M=150, radius_cut=0.9).zeros
    b = planar.laurent_zeros(RngState(3), 1.0, M=300, radius_cut=0.9).zeros
    a, b = a[np.abs(a) <= 0.8], b[np.abs(b) <= 0.8]
    assert a.size == b.size and a.size > 0
    assert np.abs(np.sort_complex(a) - np.sort_complex(b)).max() < 1e-10


def test_laurent_rotation_invariance():
    def radii(mu, seed0):
        return np.concatenate([np.abs(planar.laurent_zeros(RngState(seed0 + i), mu, 80, 0.75).zeros)
                               for i in range(3000)])

    ra = radii(1.0, 0)
    rb = radii(np.exp(1.0j), 100000)
    assert stats.ks_2samp(ra, rb).statistic < 0.02


def test_laurent_errors():
    with pytest.raises(ValueError):
        planar.laurent_zeros(RngState(0), 1.0, M=20)
    with pytest.raises(ValueError):
        planar.laurent_zeros(RngState(0), 1.0, radius_cut=0.99)
    with pytest.raises(ValueError):
        planar.ZeroSample(np.array([0.95]), 100, 0.9)


# --- parameter sweeps


def test_sweep_antiherm_trace_and_return():
    grid = np.linspace(0, 30, 61)
    tab = planar.parameter_sweep(RngState(2), "antiherm", grid, 30)
    assert np.abs(tab.values.imag.sum(axis=1) - grid).max() < 1e-9
    last = tab.values[-1]
    assert np.sum(last.imag > grid[-1] / 2) == 1
    assert np.sort(last.imag)[-2] < 10 / 30
    head, rows = tab.columns()
    assert head[0] == "grid_value" and head[-1] == "flag" and rows.shape == (61, 2 + 2 * 30)


def test_sweep_subunitary_determinant():
    grid = np.linspace(1, 0.05, 40)
    tab = planar.parameter_sweep(RngState(4), "subunitary", grid, 12)
    assert np.abs(np.prod(np.abs(tab.values), axis=1) - grid).max() < 1e-9
    with pytest.raises(ValueError):
        planar.parameter_sweep(RngState(4), "other", grid, 12)
