"""Two-dimensional spectra of rank-one non-Hermitian perturbations.

Bulk-scaled profile and kernel for ``A + i alpha e1 e1^H`` with ``A`` from the
GUE, mean eigenvector overlaps and their distribution, correlation functions
of truncated (sub-unitary) Haar matrices, zeros of random Laurent series, and
eigenvalue trajectories under a varying coupling.

In the bulk scaling the eigenvalues are multiplied by ``sqrt(2N)`` and the
coupling is ``alpha = sqrt(N/2) alpha0``; the profile parameter is
``g = (alpha0 + 1/alpha0)/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .ensembles import gaussian_hermitian, sample_haar_unitary
from .randgen import RngState
from .spectral import SecularProblem, eig_complex_dense, eig_hermitian_dense, roots_aberth, solve_secular_complex


@dataclass(frozen=True)
class PlanarParams:
    """Profile parameter ``g`` derived from ``alpha0``, plus a Laurent coupling ``mu``."""

    alpha0: float
    mu: complex = 1.0

    def __post_init__(self) -> None:
        if self.alpha0 <= 0:
            raise ValueError("alpha0 must be positive")

    @property
    def profile_g(self) -> float:
        return 0.5 * (self.alpha0 + 1.0 / self.alpha0)


# ---------------------------------------------------------------- Bessel I0, I1

def _bessel_series(z: np.ndarray, nu: int) -> np.ndarray:
    h = 0.5 * z
    term = h ** nu / math.factorial(nu)
    out = term.copy()
    h2 = h * h
    for k in range(1, 200):
        term = term * h2 / (k * (k + nu))
        out = out + term
        if np.all(term <= 1e-17 * out):
            break
    return out


def _bessel_asym_scaled(z: np.ndarray, nu: int) -> np.ndarray:
    # e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(nu) / z^k
    mu4 = 4.0 * nu * nu
    term = np.ones_like(z)
    out = np.ones_like(z)
    for k in range(1, 30):
        term = -term * (mu4 - (2 * k - 1) ** 2) / (k * 8.0 * z)
        out = out + term
    return out / np.sqrt(2.0 * np.pi * z)


def bessel_ie(nu: int, z):
    """Exponentially scaled modified Bessel function ``exp(-z) I_nu(z)`` for ``nu`` in {0, 1}, ``z >= 0``.

    Power series for ``z <= 25``, large-argument expansion beyond.
    """
    if nu not in (0, 1):
        raise ValueError("nu must be 0 or 1")
    za = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(za < 0):
        raise ValueError("z must be non-negative")
    out = np.empty_like(za)
    small = za <= 25.0
    out[small] = _bessel_series(za[small], nu) * np.exp(-za[small])
    out[~small] = _bessel_asym_scaled(za[~small], nu)
    return out.reshape(np.shape(z)) if np.ndim(z) else float(out[0])


def bessel_i0(z):
    """Modified Bessel function ``I_0``."""
    return np.exp(z) * bessel_ie(0, z)


def bessel_i1(z):
    """Modified Bessel function ``I_1``."""
    return np.exp(z) * bessel_ie(1, z)


# ------------------------------------------------------------- profile, kernel

def _check_g(g: float) -> None:
    if not g > 1:
        raise ValueError("g must exceed 1")


def _damped_sinc_terms(g: float, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``exp(-2gY) S`` and ``exp(-2gY) S'`` with ``S = sinh(2Y)/(2Y)``."""
    S = np.empty_like(Y)
    dS = np.empty_like(Y)
    small = Y < 0.1
    ys = Y[small]
    # S = sum (2Y)^{2k}/(2k+1)!, S' = sum 2k 2^{2k} Y^{2k-1}/(2k+1)!
    S[small] = 0.0
    dS[small] = 0.0
    for k in range(0, 9):
        c = 4.0 ** k / math.factorial(2 * k + 1)
        S[small] += c * ys ** (2 * k)
        if k:
            dS[small] += 2 * k * c * ys ** (2 * k - 1)
    damp = np.exp(-2.0 * g * ys)
    S[small] *= damp
    dS[small] *= damp
    yl = Y[~small]
    em = np.exp(-2.0 * (g - 1.0) * yl)
    ep = np.exp(-2.0 * (g + 1.0) * yl)
    S[~small] = (em - ep) / (4.0 * yl)
    dS[~small] = (em + ep) / (2.0 * yl) - (em - ep) / (4.0 * yl * yl)
    return S, dS


def rho_profile(g: float, Y):
    """Normalized density of scaled imaginary parts,
    ``exp(-2gY) (g sinh(2Y)/Y - d/dY[sinh(2Y)/(2Y)])``; equals ``2g`` at ``Y = 0``.
    """
    _check_g(g)
    Ya = np.atleast_1d(np.asarray(Y, dtype=float))
    if np.any(Ya < 0):
        raise ValueError("Y must be non-negative")
    S, dS = _damped_sinc_terms(g, Ya)
    out = 2.0 * g * S - dS
    return out.reshape(np.shape(Y)) if np.ndim(Y) else float(out[0])


def mean_overlap(g: float, Y):
    """Density-weighted mean diagonal overlap ``exp(-4gY) d/dY(exp(2gY) sinh(2Y)/(2Y))``."""
    _check_g(g)
    Ya = np.atleast_1d(np.asarray(Y, dtype=float))
    if np.any(Ya < 0):
        raise ValueError("Y must be non-negative")
    S, dS = _damped_sinc_terms(g, Ya)
    out = 2.0 * g * S + dS
    return out.reshape(np.shape(Y)) if np.ndim(Y) else float(out[0])


_GL32_X, _GL32_W = np.polynomial.legendre.leggauss(32)


def kernel_planar(g: float, Z1, Z2, normalized: bool = False):
    """Correlation kernel ``exp(-g(Y1 + Y2)) int_{-1}^{1} (g + s) exp(i s (Z1 - conj Z2)) ds``.

    32-point Gauss-Legendre in ``s`` when ``|Z1 - conj Z2| <= 8``, closed form
    otherwise.  With ``normalized=True`` the kernel is divided by ``pi``,
    which makes it reproducing; the unnormalized form has diagonal integrating
    to 1 in ``Y``.
    """
    Z1 = np.asarray(Z1, dtype=complex)
    Z2 = np.asarray(Z2, dtype=complex)
    if np.any(Z1.imag < 0) or np.any(Z2.imag < 0):
        raise ValueError("need Im Z >= 0")
    w = Z1 - np.conj(Z2)
    w, _ = np.broadcast_arrays(w, Z2)
    u, v = w.real, w.imag
    out = np.empty(w.shape, dtype=complex)
    near = np.abs(w) <= 8.0
    if np.any(near):
        s = _GL32_X
        wn = w[near][..., None]
        vn = v[near][..., None]
        integrand = (g + s) * np.exp(1j * s * wn.real - (s + g) * vn)
        out[near] = np.sum(_GL32_W * integrand, axis=-1)
    far = ~near
    if np.any(far):
        wf, uf, vf = w[far], u[far], v[far]
        # exp(-g v) sin(w) and exp(-g v) cos(w) from the two exponentials
        ep = np.exp(1j * uf - (1.0 + g) * vf)
        em = np.exp(-1j * uf + (1.0 - g) * vf)
        sin_d = (ep - em) / 2j
        cos_d = (ep + em) / 2.0
        out[far] = 2.0 * g * sin_d / wf + 2j * (sin_d - wf * cos_d) / wf ** 2
    if normalized:
        out = out / np.pi
    return out if out.ndim else complex(out)


def overlap_pdf(g: float, Y: float, t):
    """Distribution of ``O_nn - 1 = t`` at scaled imaginary part ``Y``.

    ``(16/t^3) exp(-2gY) L2[exp(-2gY(1 + 2/t)) I0((4Y/t) sqrt((g^2 - 1)(1 + t)))]`` where
    ``L2 f = (1 + S^2 + (1 - sinh(4Y)/(4Y))/(2Y) d/dY + (S^2 - 1)/4 d^2/dY^2)(Y^2 f)``,
    ``S = sinh(2Y)/(2Y)``; the derivatives of ``Y^2 f`` are analytic.
    """
    _check_g(g)
    if Y <= 0:
        raise ValueError("Y must be positive")
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    a = 2.0 * g * (1.0 + 2.0 / t)
    b = (4.0 / t) * np.sqrt((g * g - 1.0) * (1.0 + t))
    z = b * Y
    # common factor exp(-aY + bY); e0, e1 are the scaled Bessel values
    e0 = bessel_ie(0, z)
    e1 = bessel_ie(1, z)
    expo = -a * Y + z - 2.0 * g * Y
    phi = Y * Y * e0
    dphi = (2.0 * Y - a * Y * Y) * e0 + b * Y * Y * e1
    d2phi = (2.0 - 4.0 * a * Y + (a * a + b * b) * Y * Y) * e0 + (3.0 * b * Y - 2.0 * a * b * Y * Y) * e1
    S = math.sinh(2.0 * Y) / (2.0 * Y)
    c0 = 1.0 + S * S
    c1 = (1.0 - math.sinh(4.0 * Y) / (4.0 * Y)) / (2.0 * Y)
    c2 = 0.25 * (S * S - 1.0)
    out = 16.0 / t ** 3 * np.exp(expo) * (c0 * phi + c1 * dphi + c2 * d2phi)
    return out if out.ndim else float(out)


# ---------------------------------------------------- truncated unitary matrices

def _geom(x: np.ndarray, N: int | None) -> tuple[np.ndarray, np.ndarray]:
    # phi(x) = sum_{n<N} x^n (N=None: 1/(1-x)) and x phi'(x)
    if N is None:
        return 1.0 / (1.0 - x), x / (1.0 - x) ** 2
    n = np.arange(N)
    p = x[..., None] ** n
    return p.sum(-1), (n * p).sum(-1)


def _s_coefficients(z: np.ndarray, N: int | None) -> np.ndarray:
    """Coefficients in ``s`` of ``det[(s + x d/dx) phi(x)]_{x = z_i conj z_j}`` by interpolation."""
    k = z.size
    X = z[:, None] * np.conj(z)[None, :]
    phi, xdphi = _geom(X, N)
    nodes = np.arange(k + 1, dtype=float)
    vals = np.array([np.linalg.det(s * phi + xdphi) for s in nodes])
    V = np.vander(nodes, k + 1, increasing=True)
    return np.linalg.solve(V, vals).real


def _D_powers_finite(x: float, A: float, N: int) -> list[float]:
    # (d/dx x)^l [x^{-1} (1 - A/x)^{N-1}], l = 0, 1, 2
    r = 1.0 - A / x
    h0 = r ** (N - 1) / x
    h1 = (N - 1) * A * r ** (N - 2) / x ** 2 if N >= 2 else 0.0
    h2 = (N - 1) * A * r ** (N - 3) * ((N - 1) * A / x - 1.0) / x ** 2 if N >= 3 else (
        0.0 if N < 2 else -A / x ** 2)
    return [h0, h1, h2]


def _D_powers_scaled(x: float, c: float) -> list[float]:
    # (d/dx x)^l [x^{-1} exp(-c/x)], l = 0, 1, 2
    e = math.exp(-c / x)
    return [e / x, c / x ** 2 * e, (-c / x ** 2 + c * c / x ** 3) * e]


def cue_density(kind: str, z, *, N: int | None = None, a: complex = 0.0, mu: complex | None = None,
                k: int | None = None):
    """``k``-point eigenvalue correlation (``k <= 2``) of truncated Haar unitaries.

    Parameters
    ----------
    kind : {"finite", "kac", "scaled"}
        ``finite``: ``U diag(a, 1, ..., 1)`` with ``U`` Haar of size ``N``.
        ``kac``: the ``N -> inf`` limit at ``a = 0``, kernel ``1/(1 - z w)^2``.
        ``scaled``: ``a = 1/(mu sqrt(N))`` with ``N -> inf``.
    z : sequence of complex
        The ``k`` points, all inside the unit disk.  With ``k=1`` and an array
        ``z`` the density is evaluated pointwise.

    Raises
    ------
    ValueError
        Points outside the disk, ``k > 2``, or (finite kind) ``prod |z|^2 < |a|^2``.
    """
    if kind not in ("finite", "kac", "scaled"):
        raise ValueError(f"unknown kind {kind!r}")
    za = np.atleast_1d(np.asarray(z, dtype=complex))
    if k == 1 and za.size > 1:
        out = np.array([cue_density(kind, [v], N=N, a=a, mu=mu) for v in za.ravel()])
        return out.reshape(np.shape(z))
    kk = za.size
    if kk > 2:
        raise ValueError("k-point correlations are provided for k <= 2")
    if np.any(np.abs(za) >= 1):
        raise ValueError("points must lie inside the unit disk")
    x = float(np.prod(np.abs(za) ** 2))
    if kind == "kac":
        M = 1.0 / (1.0 - za[:, None] * np.conj(za)[None, :]) ** 2
        return float(np.linalg.det(M).real / np.pi ** kk)
    if kind == "finite":
        if N is None or N < 1:
            raise ValueError("finite kind needs N >= 1")
        A = abs(a) ** 2
        if A >= 1:
            raise ValueError("need |a| < 1")
        if x < A:
            raise ValueError("prod |z|^2 < |a|^2: region not covered")
        q = _s_coefficients(za, N)
        D = _D_powers_finite(x, A, N)
        pref = (1.0 - A) ** (1 - N) / np.pi ** kk
    else:
        if mu is None:
            raise ValueError("scaled kind needs mu")
        if x == 0:
            return 0.0
        c = 1.0 / abs(mu) ** 2
        q = _s_coefficients(za, None)
        D = _D_powers_scaled(x, c)
        pref = math.exp(c) / np.pi ** kk
    return float(pref * sum(q[l] * D[l] for l in range(kk + 1)))


# --------------------------------------------------------------- Laurent zeros

@dataclass
class ZeroSample:
    """Zeros of a truncated random Laurent series inside ``radius_cut``."""

    zeros: np.ndarray
    truncation_degree: int
    radius_cut: float

    def __post_init__(self) -> None:
        if np.any(np.abs(self.zeros) >= self.radius_cut):
            raise ValueError("zeros must lie inside radius_cut")


def laurent_coefficients(state: RngState, M: int) -> np.ndarray:
    """``c_1..c_M`` standard complex Gaussian; the first ``M`` are the same for any larger ``M``."""
    g = state.generator.standard_normal((M, 2))
    return (g[:, 0] + 1j * g[:, 1]) * math.sqrt(0.5)


def laurent_zeros(state: RngState, mu: complex, M: int = 300, radius_cut: float = 0.9) -> ZeroSample:
    """Zeros ``lambda`` of ``1/mu - sum_{j=1}^M c_j lambda^j`` with ``|lambda| < radius_cut``.

    ``mu = inf`` drops the constant term, so ``lambda = 0`` is a zero.
    """
    if M < 50:
        raise ValueError("M must be at least 50")
    if not 0 < radius_cut <= 0.95:
        raise ValueError("radius_cut must lie in (0, 0.95]")
    c = laurent_coefficients(state, M)
    c0 = 0.0 if np.isinf(abs(mu)) else 1.0 / mu
    coeffs = np.concatenate([[c0], -c])
    r = roots_aberth(coeffs).values
    return ZeroSample(r[np.abs(r) < radius_cut], M, radius_cut)


# --------------------------------------------------------------- trajectories

@dataclass
class SweepTable:
    """Eigenvalue trajectories: ``values[i, j]`` is trajectory ``j`` at ``grid[i]``."""

    model: str
    grid: np.ndarray
    values: np.ndarray
    flags: np.ndarray
    meta: dict = field(default_factory=dict)

    def columns(self) -> tuple[list[str], np.ndarray]:
        """Header and rows ``grid_value, re_1, im_1, ..., flag``."""
        n = self.values.shape[1]
        head = ["grid_value"] + [f"{p}_{j + 1}" for j in range(n) for p in ("re", "im")] + ["flag"]
        inter = np.empty((self.grid.size, 2 * n))
        inter[:, 0::2] = self.values.real
        inter[:, 1::2] = self.values.imag
        return head, np.column_stack([self.grid, inter, self.flags.astype(float)])


def _match(prev: np.ndarray, new: np.ndarray) -> tuple[np.ndarray, bool]:
    cost = np.abs(prev[:, None] - new[None, :])
    _, col = linear_sum_assignment(cost)
    matched = new[col]
    move = np.abs(matched - prev)
    gap = np.abs(prev[:, None] - prev[None, :])
    np.fill_diagonal(gap, np.inf)
    return matched, bool(np.any(move > 0.5 * gap.min(axis=1)))


def parameter_sweep(state: RngState, model: str, grid, N: int) -> SweepTable:
    """Eigenvalues of one fixed realization along a coupling grid, matched step to step.

    ``model="antiherm"``: ``A + i alpha e1 e1^H`` with ``A`` a GUE matrix scaled
    to support ``(-2, 2)``; eigenvalues from the secular equation of the fixed
    diagonalized ``A``.  ``model="subunitary"``: ``U diag(a, 1, ..., 1)`` with
    ``U`` Haar; dense non-Hermitian eigensolver.  Rows where a trajectory moves
    more than half the distance to its nearest neighbour are flagged.
    """
    grid = np.asarray(grid, dtype=float)
    if model == "antiherm":
        A = gaussian_hermitian(state, N, 2, variance=0.5) / math.sqrt(N / 2.0)
        spec = eig_hermitian_dense(A, vectors=True)
        mu = np.asarray(spec.values, dtype=float)
        w = np.abs(spec.vectors[0, :]) ** 2
        w = w / w.sum()

        def eigs(alpha):
            if alpha == 0:
                return mu.astype(complex)
            return solve_secular_complex(SecularProblem(mu, w, alpha)).values
    elif model == "subunitary":
        U = sample_haar_unitary(state, N)

        def eigs(a):
            M = U.copy()
            M[:, 0] *= a
            return eig_complex_dense(M).values
    else:
        raise ValueError("model must be 'antiherm' or 'subunitary'")
    vals = np.empty((grid.size, N), dtype=complex)
    flags = np.zeros(grid.size, dtype=bool)
    vals[0] = np.sort_complex(eigs(grid[0]))
    for i in range(1, grid.size):
        vals[i], flags[i] = _match(vals[i - 1], eigs(grid[i]))
    return SweepTable(model, grid, vals, flags)
