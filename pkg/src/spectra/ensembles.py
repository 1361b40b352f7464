"""Samplers for rank-one perturbed random matrices.

Conventions, fixed here once:

* An unscaled Gaussian Hermitian matrix ``G`` has weight ``exp(-Tr G^2 / 2)``:
  diagonal entries N[0, 1], off-diagonal entries N[0, 1/2] (real case) or
  complex with each component N[0, 1/2] (complex case).  ``G / sqrt(2 beta N)``
  then has semicircle support [-1, 1].
* The anti-Hermitian perturbation model uses the GUE weight ``exp(-Tr A^2)``,
  i.e. ``G / sqrt(2)``, which puts the bulk at the origin on density
  ``1/pi`` after multiplying by ``sqrt(2N)``.

==============================  ===========================================
``sample_gaussian_dense``       GOE/GUE/2sqrt(beta N) plus alpha e1 e1^T
``sample_tridiag``              beta-Hermite tridiagonal model with spike
``sample_laguerre_bidiag``      beta-Laguerre bidiagonal model with spike b
``sample_spiked_wishart_dense`` X1 X1^H + b x x^H
``sample_spiked_wishart_secular`` its nonzero spectrum via the secular equation
``sample_haar_unitary``         Haar unitary via phase-corrected QR
``sample_subunitary``           U diag(a, 1, ..., 1)
``sample_antiherm``             GUE + i alpha e1 e1^T
``sample_antiherm_spectrum``    same spectrum via the secular equation
``wishart_update_stream``       spectra of W_n = sum_{j<=n} v_j v_j^T
``dyson_paths``                 heat-kernel resampling from diag(alpha, 0...)
``sample_iid_shifted``          iid Uniform[0, 1] entries
==============================  ===========================================
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .randgen import RngState, chi, gaussian, uniform
from .spectral import (
    RealSpectrum,
    SecularProblem,
    all_eigenvalues,
    eig_hermitian_dense,
    solve_secular_complex,
    solve_secular_real,
)


@dataclass
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix; arrays may carry a leading batch axis."""

    diag: np.ndarray
    offdiag: np.ndarray

    @property
    def N(self) -> int:
        return self.diag.shape[-1]

    def to_dense(self) -> np.ndarray:
        if self.diag.ndim != 1:
            raise ValueError("to_dense expects a single matrix")
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def __getitem__(self, i) -> "TridiagonalMatrix":
        return TridiagonalMatrix(self.diag[i], self.offdiag[i])


@dataclass
class BidiagonalModel:
    """Lower bidiagonal ``L`` (main diagonal ``main``, subdiagonal ``sub``).

    The eigenvalues of ``L L^T`` are those of the spiked beta-Laguerre model;
    ``main[0]`` carries the factor ``sqrt(b)``.
    """

    main: np.ndarray
    sub: np.ndarray
    spike_b: float
    beta: float
    n: int
    N: int

    def gram(self) -> TridiagonalMatrix:
        """``L L^T`` as a tridiagonal matrix (batch axes preserved)."""
        m, s = self.main, self.sub
        d = m ** 2
        d[..., 1:] += s ** 2
        return TridiagonalMatrix(d, m[..., :-1] * s)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.main) + np.diag(self.sub, -1)


@dataclass(frozen=True)
class SpikedWishartSpec:
    n: int
    N: int
    b: float

    def __post_init__(self) -> None:
        if self.n < self.N or self.N < 1:
            raise ValueError("need n >= N >= 1")
        if self.b <= 0:
            raise ValueError("need b > 0")

    @property
    def gamma(self) -> float:
        return self.n / self.N


@dataclass(frozen=True)
class DysonConfig:
    N: int
    alpha: float
    total_time: float
    steps: int

    def __post_init__(self) -> None:
        if self.steps < 1 or self.total_time <= 0 or self.N < 1:
            raise ValueError("need steps >= 1, total_time > 0, N >= 1")


def gaussian_hermitian(state: RngState, N: int, beta: int = 1, variance: float = 1.0, size=None):
    """Hermitian Gaussian matrix with weight ``exp(-Tr G^2 / (2 variance))``."""
    shape = (N, N) if size is None else (size, N, N)
    if beta == 1:
        X = gaussian(state, "real", shape)
    elif beta == 2:
        X = np.sqrt(2.0) * gaussian(state, "complex", shape)
    else:
        raise ValueError("dense sampling supports beta in {1, 2}")
    H = 0.5 * (X + np.swapaxes(X, -1, -2).conj())
    return np.sqrt(variance) * H


def sample_gaussian_dense(state: RngState, beta: int, N: int, alpha: float, size=None) -> np.ndarray:
    """``G / sqrt(2 beta N) + alpha e1 e1^T`` with ``G`` from the GOE or GUE.

    Parameters
    ----------
    beta : {1, 2}
    size : int, optional
        Number of independent matrices stacked along a leading axis.
    """
    if beta not in (1, 2):
        raise ValueError("beta must be 1 or 2")
    if N < 1:
        raise ValueError("N must be positive")
    H = gaussian_hermitian(state, N, beta, size=size) / np.sqrt(2.0 * beta * N)
    H[..., 0, 0] += alpha
    return H


def sample_tridiag(state: RngState, beta: float, N: int, alpha: float = 0.0, size=None,
                   leading: int | None = None) -> TridiagonalMatrix:
    """Tridiagonal beta-Hermite model ``(C0 + C1 + C1^T)/sqrt(2 beta N)``.

    ``C0`` is diagonal with N[0, 1] entries except the first, which is
    N[alpha sqrt(2 beta N), 1]; the off-diagonal of ``C1`` is
    ``chi~_{beta(N-1)}, ..., chi~_beta`` with ``chi~_k = sqrt(Gamma[k/2, 1])``.

    Parameters
    ----------
    size : int, optional
        Batch of independent matrices along a leading axis.
    leading : int, optional
        Only generate the leading ``leading x leading`` block (same law as the
        block of the full matrix); used with truncated eigenvalue solves.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if N < 1:
        raise ValueError("N must be positive")
    m = N if leading is None else min(leading, N)
    scale = np.sqrt(2.0 * beta * N)
    shape = (m,) if size is None else (size, m)
    d = gaussian(state, "real", shape)
    d[..., 0] += alpha * scale
    k = beta * np.arange(N - 1, N - m, -1, dtype=float)
    oshape = (m - 1,) if size is None else (size, m - 1)
    e = chi(state, np.broadcast_to(k, oshape)) if m > 1 else np.zeros(oshape)
    return TridiagonalMatrix(d / scale, e / scale)


def sample_laguerre_bidiag(state: RngState, beta: float, n: int, N: int, b: float, size=None) -> BidiagonalModel:
    """Spiked beta-Laguerre bidiagonal model.

    ``main = (sqrt(b) chi_{beta n}, chi_{beta(n-1)}, ..., chi_{beta(n-N+1)}) / sqrt(beta)``
    and ``sub = (chi_{beta(N-1)}, ..., chi_beta) / sqrt(beta)`` with the
    classical ``chi_p^2 ~ Gamma[p/2, 2]``.
    """
    if n < N or N < 1:
        raise ValueError("need n >= N >= 1")
    if beta <= 0 or b <= 0:
        raise ValueError("need beta > 0 and b > 0")
    ks = beta * np.arange(n, n - N, -1, dtype=float)
    shape = (N,) if size is None else (size, N)
    main = chi(state, np.broadcast_to(ks, shape), tilde=False)
    main[..., 0] *= np.sqrt(b)
    sshape = (N - 1,) if size is None else (size, N - 1)
    if N > 1:
        sub = chi(state, np.broadcast_to(beta * np.arange(N - 1, 0, -1, dtype=float), sshape), tilde=False)
    else:
        sub = np.zeros(sshape)
    r = np.sqrt(beta)
    return BidiagonalModel(main / r, sub / r, float(b), float(beta), n, N)


def sample_spiked_wishart_dense(state: RngState, spec: SpikedWishartSpec, return_factor: bool = False):
    """``X1 X1^H + b x x^H`` (``n x n``) from an ``n x N`` complex Gaussian ``X = [x | X1]``.

    With ``return_factor`` the pair ``(W, X)`` is returned.
    """
    X = gaussian(state, "complex", (spec.n, spec.N))
    x = X[:, :1]
    X1 = X[:, 1:]
    W = X1 @ X1.conj().T + spec.b * (x @ x.conj().T)
    W = 0.5 * (W + W.conj().T)
    return (W, X) if return_factor else W


def spiked_wishart_gram(X: np.ndarray, b: float) -> np.ndarray:
    """``Sigma^{1/2} X^H X Sigma^{1/2}`` with ``Sigma = diag(b, 1, ..., 1)`` (``N x N``)."""
    s = np.ones(X.shape[-1])
    s[0] = np.sqrt(b)
    G = np.swapaxes(X, -1, -2).conj() @ X
    G = s[:, None] * G * s[None, :]
    return 0.5 * (G + np.swapaxes(G, -1, -2).conj())


def sample_spiked_wishart_secular(state: RngState, spec: SpikedWishartSpec) -> RealSpectrum:
    """Nonzero eigenvalues of ``X1 X1^H + b x x^H`` through the secular equation.

    The poles are the ``N - 1`` nonzero eigenvalues of ``X1 X1^H``; in its
    eigenbasis ``|x . u_j|^2 ~ Gamma[1, 1]`` independently, and the squared
    projection of ``x`` onto the ``(n - N + 1)``-dimensional null space is
    ``Gamma[n - N + 1, 1]``, giving a pole at zero.  Returns ``N`` zeros,
    descending.
    """
    n, N = spec.n, spec.N
    if N > 1:
        X1 = gaussian(state, "complex", (n, N - 1))
        mu = np.maximum(eig_hermitian_dense(X1.conj().T @ X1).values, np.finfo(float).tiny)
    else:
        mu = np.zeros(0)
    g = state.generator
    w = g.standard_exponential(N - 1)
    u0 = g.standard_gamma(n - N + 1)
    out = solve_secular_real(SecularProblem(mu, w, spec.b, pole_at_zero_weight=u0))
    out.meta.update(ensemble="spiked-wishart-secular", n=n, N=N, b=spec.b)
    return out


def sample_haar_unitary(state: RngState, N: int) -> np.ndarray:
    """Haar unitary from the QR factorization of a complex Ginibre matrix."""
    if N < 1:
        raise ValueError("N must be positive")
    Z = gaussian(state, "complex", (N, N))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    ph = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return Q * ph[None, :]


def sample_subunitary(state: RngState, N: int, a: complex) -> np.ndarray:
    """``U A`` with ``U`` Haar and ``A = diag(a, 1, ..., 1)``, ``|a| < 1``."""
    if abs(a) >= 1:
        raise ValueError("need |a| < 1")
    U = sample_haar_unitary(state, N)
    U[:, 0] *= a
    return U


def sample_antiherm(state: RngState, N: int, alpha: float) -> np.ndarray:
    """``A + i alpha diag(1, 0, ..., 0)`` with ``A`` from the GUE of weight ``exp(-Tr A^2)``."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    A = gaussian_hermitian(state, N, 2, variance=0.5).astype(complex)
    A[0, 0] += 1j * alpha
    return A


def gue_spectrum_and_weights(state: RngState, N: int):
    """Eigenvalues of a GUE matrix of weight ``exp(-Tr A^2)`` and the squared
    first components of its eigenvectors.

    The eigenvalues come from the beta=2 tridiagonal model; for the GUE the
    eigenvector matrix is Haar and independent of them, so the weights are a
    flat Dirichlet vector.
    """
    T = sample_tridiag(state, 2.0, N, 0.0)
    mu = all_eigenvalues(T.diag, T.offdiag)[0] * np.sqrt(2.0 * 2.0 * N) / np.sqrt(2.0)
    g = state.generator.standard_exponential(N)
    return mu, g / g.sum()


def sample_antiherm_spectrum(state: RngState, N: int, alpha: float) -> np.ndarray:
    """Eigenvalues of :func:`sample_antiherm` drawn through the secular equation.

    Same law as diagonalizing the dense matrix, at O(N^2) cost per sample.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    mu, w = gue_spectrum_and_weights(state, N)
    return solve_secular_complex(SecularProblem(mu, w, alpha)).values


def wishart_update_stream(state: RngState, N: int, n_max: int) -> list[RealSpectrum]:
    """Spectra of ``W_n = sum_{j<=n} v_j v_j^T`` for ``n = 1..n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    W = np.zeros((N, N))
    out = []
    for n in range(1, n_max + 1):
        v = gaussian(state, "real", N)
        W += np.outer(v, v)
        s = eig_hermitian_dense(W)
        s.meta.update(ensemble="wishart-update", n=n)
        out.append(s)
    return out


def dyson_paths(state: RngState, cfg: DysonConfig, vectors: bool = False):
    """Eigenvalue trajectories of the GOE heat-kernel walk.

    Starting from ``diag(alpha, 0, ..., 0)`` each of the ``steps`` updates adds
    ``sqrt(dt) G`` with ``G`` an unscaled GOE matrix (diagonal variance 1,
    off-diagonal variance 1/2), ``dt = total_time / steps``.

    Returns
    -------
    ndarray, shape (steps + 1, N)
        Row ``j`` holds the descending spectrum after ``j`` steps.
    ndarray, shape (steps + 1, N, N)
        Only with ``vectors``: the matching eigenvectors (columns).
    """
    N = cfg.N
    dt = cfg.total_time / cfg.steps
    H = np.zeros((N, N))
    H[0, 0] = cfg.alpha
    out = np.empty((cfg.steps + 1, N))
    vecs = np.empty((cfg.steps + 1, N, N)) if vectors else None
    s = eig_hermitian_dense(H, vectors=vectors)
    for j in range(cfg.steps + 1):
        if j:
            H = H + np.sqrt(dt) * gaussian_hermitian(state, N, 1)
            s = eig_hermitian_dense(H, vectors=vectors)
        out[j] = s.values
        if vectors:
            vecs[j] = s.vectors
    return (out, vecs) if vectors else out


def crossing_steps(vecs: np.ndarray) -> np.ndarray:
    """Steps where sorted labels stop following the eigenvectors.

    ``vecs`` is the eigenvector history from ``dyson_paths(..., vectors=True)``.
    At step ``j`` each eigenvector is matched to its predecessor by the
    assignment maximizing total squared overlap; the step is flagged when that
    assignment is not the identity, i.e. an eigenvalue passed a neighbour
    within one time step.  Step 1 is skipped because the degenerate initial
    eigenspace has no preferred basis.
    """
    from scipy.optimize import linear_sum_assignment

    bad = []
    for j in range(2, vecs.shape[0]):
        ov = np.abs(vecs[j - 1].T @ vecs[j]) ** 2
        _, col = linear_sum_assignment(-ov)
        if np.any(col != np.arange(col.size)):
            bad.append(j)
    return np.asarray(bad, dtype=int)


def sample_iid_shifted(state: RngState, N: int) -> np.ndarray:
    """``N x N`` matrix of iid Uniform[0, 1] entries."""
    if N < 2:
        raise ValueError("N must be at least 2")
    return uniform(state, (N, N))
