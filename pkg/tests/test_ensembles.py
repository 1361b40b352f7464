from __future__ import annotations

import numpy as np
import pytest
from scipy import integrate, stats

import spectra.ensembles as ens
from spectra.randgen import RngState
from spectra.spectral import eig_complex_dense, eig_hermitian_dense, eig_sym_tridiag, largest_eigenvalues


def test_dense_scalar_variance():
    x = ens.sample_gaussian_dense(RngState(1), 1, 1, 0.0, size=100_000)[:, 0, 0]
    # G / sqrt(2): diagonal variance 1/2
    assert abs(x.var() - 0.5) < 0.01


def test_dense_hermitian_and_entry_variances():
    for beta in (1, 2):
        H = ens.sample_gaussian_dense(RngState(2), beta, 6, 0.4, size=20_000)
        assert np.abs(H - np.swapaxes(H, -1, -2).conj()).max() < 1e-15
        G = H * np.sqrt(2 * beta * 6)
        G[:, 0, 0] -= 0.4 * np.sqrt(2 * beta * 6)
        assert abs(G[:, 1, 1].real.var() - 1) < 0.03
        assert abs(G[:, 0, 1].real.var() - 0.5) < 0.02
        if beta == 2:
            assert abs(G[:, 0, 1].imag.var() - 0.5) < 0.02
    with pytest.raises(ValueError):
        ens.sample_gaussian_dense(RngState(0), 4, 3, 0.0)


def test_dense_outlier_five_thirds():
    H = ens.sample_gaussian_dense(RngState(3), 1, 100, 1.5, size=200)
    lam = np.linalg.eigvalsh(H)[:, -1]
    assert abs(lam.mean() - 5 / 3) < 0.05


def test_tridiag_matches_dense_largest():
    st = RngState(4)
    T = ens.sample_tridiag(st, 1.0, 8, 1.0, size=10_000)
    a = largest_eigenvalues(T.diag, T.offdiag)
    b = np.linalg.eigvalsh(ens.sample_gaussian_dense(st, 1, 8, 1.0, size=10_000))[:, -1]
    assert stats.ks_2samp(a, b).statistic < 0.02


@pytest.mark.parametrize("beta", [1, 2])
def test_tridiag_dense_all_order_statistics(beta):
    st = RngState(10 + beta)
    T = ens.sample_tridiag(st, float(beta), 6, 0.7, size=10_000)
    a = np.sort(np.linalg.eigvalsh(np.stack([T[i].to_dense() for i in range(10_000)])), axis=1)
    b = np.linalg.eigvalsh(ens.sample_gaussian_dense(st, beta, 6, 0.7, size=10_000))
    for j in range(6):
        assert stats.ks_2samp(a[:, j], b[:, j]).statistic < 0.03


def test_tridiag_unshifted_mean_and_positivity():
    for beta in (0.5, 1.0, 4.0):
        T = ens.sample_tridiag(RngState(5), beta, 50, 0.0, size=100_000)
        assert abs(T.diag[:, 0].mean()) < 0.01 * (2 * beta * 50) ** -0.5 * 5
        assert np.all(T.offdiag > 0)
    with pytest.raises(ValueError):
        ens.sample_tridiag(RngState(0), 0.0, 5)


def test_tridiag_leading_block():
    T = ens.sample_tridiag(RngState(6), 2.0, 1000, 0.5, leading=30)
    assert T.diag.size == 30 and T.offdiag.size == 29


def test_laguerre_1x1_and_trace():
    B = ens.sample_laguerre_bidiag(RngState(7), 2.0, 7, 1, 3.0, size=100_000)
    assert abs(np.mean(B.main[:, 0] ** 2) / (3.0 * 7) - 1) < 0.01
    B = ens.sample_laguerre_bidiag(RngState(8), 2.0, 2, 2, 1.0, size=100_000)
    tr = np.sum(B.main ** 2, axis=1) + np.sum(B.sub ** 2, axis=1)
    assert abs(tr.mean() - 4) < 0.05
    with pytest.raises(ValueError):
        ens.sample_laguerre_bidiag(RngState(0), 2.0, 3, 4, 1.0)


def test_laguerre_gram_matches_dense_product():
    B = ens.sample_laguerre_bidiag(RngState(9), 1.5, 12, 5, 2.0)
    D = B.to_dense()
    T = B.gram()
    assert np.allclose(T.to_dense(), D @ D.T, atol=1e-12)
    assert np.all(B.main >= 0) and np.all(B.sub >= 0)


def test_laguerre_outlier():
    B = ens.sample_laguerre_bidiag(RngState(10), 2.0, 400, 200, 3.0, size=100)
    T = B.gram()
    lam = largest_eigenvalues(T.diag, T.offdiag) / 400
    assert abs(lam.mean() - 3.75) < 0.1


def test_wishart_dense_gram_same_nonzero_spectrum():
    spec = ens.SpikedWishartSpec(30, 12, 2.5)
    W, X = ens.sample_spiked_wishart_dense(RngState(11), spec, return_factor=True)
    a = eig_hermitian_dense(W).values[:12]
    b = eig_hermitian_dense(ens.spiked_wishart_gram(X, 2.5)).values
    assert np.max(np.abs(a - b) / np.abs(b)) < 1e-10
    with pytest.raises(ValueError):
        ens.SpikedWishartSpec(3, 4, 1.0)
    with pytest.raises(ValueError):
        ens.SpikedWishartSpec(4, 4, 0.0)


def _mp_cdf_factory(c):
    lo, hi = (1 - np.sqrt(c)) ** 2, (1 + np.sqrt(c)) ** 2
    dens = lambda x: np.sqrt(max((hi - x) * (x - lo), 0.0)) / (2 * np.pi * c * x)
    grid = np.linspace(lo, hi, 801)
    cum = np.concatenate([[0.0], np.cumsum([integrate.quad(dens, a, b)[0] for a, b in zip(grid[:-1], grid[1:])])])
    return lambda x: np.interp(x, grid, cum / cum[-1])


def test_wishart_unspiked_marchenko_pastur():
    lam = []
    st = RngState(12)
    for _ in range(5):
        X = ens.gaussian(st, "complex", (400, 200))
        lam.append(eig_hermitian_dense(ens.spiked_wishart_gram(X, 1.0)).values / 400)
    lam = np.concatenate(lam)
    assert stats.kstest(lam, _mp_cdf_factory(0.5)).statistic < 0.03


def test_wishart_dense_outlier():
    st = RngState(13)
    lam = [eig_hermitian_dense(ens.spiked_wishart_gram(ens.gaussian(st, "complex", (400, 200)), 3.0)).values[0]
           for _ in range(100)]
    assert abs(np.mean(lam) / 400 - 3.75) < 0.1


def test_wishart_secular_matches_dense_law():
    st = RngState(14)
    spec = ens.SpikedWishartSpec(15, 6, 2.0)
    a = np.array([ens.sample_spiked_wishart_secular(st, spec).values for _ in range(4000)])
    b = np.array([eig_hermitian_dense(ens.spiked_wishart_gram(ens.gaussian(st, "complex", (15, 6)), 2.0)).values
                  for _ in range(4000)])
    for j in range(6):
        assert stats.ks_2samp(a[:, j], b[:, j]).statistic < 0.04


def test_haar_unitary():
    st = RngState(15)
    U = ens.sample_haar_unitary(st, 7)
    assert np.abs(U.conj().T @ U - np.eye(7)).max() < 1e-12
    u11 = np.array([abs(ens.sample_haar_unitary(st, 4)[0, 0]) ** 2 for _ in range(100_000)])
    assert abs(u11.mean() - 0.25) < 0.005
    ang = np.concatenate([np.angle(np.linalg.eigvals(ens.sample_haar_unitary(st, 5))) for _ in range(4000)])
    counts, _ = np.histogram(np.mod(ang, 2 * np.pi), bins=20, range=(0, 2 * np.pi))
    assert stats.chisquare(counts).pvalue > 0.01


def test_subunitary():
    st = RngState(16)
    a = 0.3 + 0.4j
    for _ in range(20):
        M = ens.sample_subunitary(st, 12, a)
        assert abs(abs(np.linalg.det(M)) - abs(a)) < 1e-12
        z = eig_complex_dense(M).values
        assert abs(np.prod(np.abs(z) ** 2) - abs(a) ** 2) < 1e-10
        assert np.all(np.abs(z) < 1 + 1e-12)
    z = eig_complex_dense(ens.sample_subunitary(st, 9, 0.0)).values
    assert np.sum(np.abs(z) < 1e-12) == 1
    with pytest.raises(ValueError):
        ens.sample_subunitary(st, 3, 1.0)


def test_antiherm():
    st = RngState(17)
    for _ in range(20):
        z = eig_complex_dense(ens.sample_antiherm(st, 15, 0.8)).values
        assert np.all(z.imag > 0)
        assert abs(z.imag.sum() - 0.8) < 1e-10
    M = ens.sample_antiherm(st, 1, 2.0)
    assert eig_complex_dense(M).values[0] == M[0, 0]
    assert M[0, 0].imag == 2.0
    with pytest.raises(ValueError):
        ens.sample_antiherm(st, 3, 0.0)


def test_antiherm_secular_route_same_law():
    st = RngState(18)
    a = np.array([np.sort(ens.sample_antiherm_spectrum(st, 8, 1.0).imag)[-1] for _ in range(4000)])
    b = np.array([np.sort(eig_complex_dense(ens.sample_antiherm(st, 8, 1.0)).values.imag)[-1] for _ in range(4000)])
    assert stats.ks_2samp(a, b).statistic < 0.04


def test_wishart_update_stream():
    st = RngState(19)
    s = ens.wishart_update_stream(st.copy(), 6, 10)
    v = ens.gaussian(st, "real", 6)
    assert abs(s[0].values[0] - v @ v) < 1e-12
    assert np.sum(np.abs(s[0].values) > 1e-10) == 1
    for a, b in zip(s[:-1], s[1:]):
        nz_a = a.values[a.values > 1e-9]
        nz_b = b.values[b.values > 1e-9]
        # nonzero eigenvalues of W_{n+1} strictly interlace those of W_n
        k = nz_a.size
        assert np.all(nz_b[:k] > nz_a)
        assert np.all(nz_b[1:k + 1] < nz_a) if nz_b.size > k else np.all(nz_b[1:] < nz_a[:-1])
    tr = [ens.wishart_update_stream(st, 5, 8)[-1].values.sum() / 40 for _ in range(1000)]
    assert abs(np.mean(tr) - 1) < 0.02
    with pytest.raises(ValueError):
        ens.wishart_update_stream(st, 3, 0)


def test_dyson_single_step_variance():
    st = RngState(20)
    t = 0.3
    P = np.array([ens.dyson_paths(st, ens.DysonConfig(1, 0.0, t, 1))[-1, 0] for _ in range(40_000)])
    assert abs(P.var() / t - 1) < 0.02
    with pytest.raises(ValueError):
        ens.DysonConfig(3, 0.0, 0.0, 2)
    with pytest.raises(ValueError):
        ens.DysonConfig(3, 0.0, 1.0, 0)


def test_dyson_ordered_and_crossing_flags():
    P = ens.dyson_paths(RngState(21), ens.DysonConfig(10, 1.2, 1 / 20, 50))
    assert P.shape == (51, 10)
    assert np.all(np.diff(P, axis=1) <= 0)
    # well separated pair, tiny steps: labels follow the eigenvectors
    P, V = ens.dyson_paths(RngState(22), ens.DysonConfig(2, 2.0, 0.01, 100), vectors=True)
    assert V.shape == (101, 2, 2)
    assert ens.crossing_steps(V).size == 0
    # a single huge step between two near-degenerate levels swaps them half the time
    flags = [ens.crossing_steps(ens.dyson_paths(RngState(s), ens.DysonConfig(2, 0.01, 50.0, 3),
                                                 vectors=True)[1]).size for s in range(40)]
    assert 0 < sum(f > 0 for f in flags) < 40


def test_dyson_endpoint_matches_direct():
    st = RngState(22)
    N = 30
    a = np.array([ens.dyson_paths(st, ens.DysonConfig(N, 1.2, 1 / (2 * N), 5))[-1, 0] for _ in range(2000)])
    b = np.linalg.eigvalsh(ens.sample_gaussian_dense(st, 1, N, 1.2, size=20_000))[:, -1]
    assert stats.ks_2samp(a, b).statistic < 0.04


def test_iid_shifted():
    st = RngState(23)
    M = ens.sample_iid_shifted(st, 100)
    assert M.min() >= 0 and M.max() <= 1
    z = eig_complex_dense(M).values
    top = z[np.argmax(np.abs(z))]
    # outlier near N/2, bulk of radius sqrt(N/12)
    assert abs(top.real - 50) < 0.5 * np.sqrt(100 / 12) * 3
    rest = np.delete(z, np.argmax(np.abs(z))) / np.sqrt(100 / 12)
    assert np.sum(np.abs(rest) > 1.1) <= 2
    with pytest.raises(ValueError):
        ens.sample_iid_shifted(st, 1)


def test_iid_shifted_scaled_outlier():
    st = RngState(24)
    vals = []
    for _ in range(20):
        M = ens.sample_iid_shifted(st, 100)
        vals.append(np.max(np.abs(eig_complex_dense(M - 0.5 + np.sqrt(3 / 100)).values)))
    # M - 1/2 + sqrt(3/N) has outlier N sqrt(3/N) = sqrt(3N) ~ 17.3
    assert abs(np.mean(vals) - np.sqrt(300)) < 1.0
