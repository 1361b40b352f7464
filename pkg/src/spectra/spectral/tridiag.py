"""Symmetric tridiagonal eigenvalues.

Three routes share the ``(diag, offdiag)`` representation:

* implicit-shift QL for the full spectrum (optionally with vectors),
* Sturm-sequence bisection for the k largest eigenvalues,
* bisection on the leading ``ceil(10 N^{1/3})`` block for the largest
  eigenvalue of a spiked model, whose top eigenvector lives near the spike.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._types import ConvergenceError, RealSpectrum

_EPS = np.finfo(float).eps


@njit(cache=True)
def _tql(d, e, z, want_z):
    # d: diagonal (overwritten with eigenvalues), e: off-diagonal padded to
    # length n (e[i] couples i and i+1), z: rotations accumulate into columns
    n = d.size
    eps = 2.220446049250313e-16
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 60:
                return False
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            early = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    early = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_z:
                    for k in range(z.shape[0]):
                        f = z[k, i + 1]
                        z[k, i + 1] = s * z[k, i] + c * f
                        z[k, i] = c * z[k, i] - s * f
                i -= 1
            if early:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return True


@njit(cache=True)
def _sturm_below(d, e2, x, pivmin):
    # number of eigenvalues strictly below x
    n = d.size
    cnt = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        cnt += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            cnt += 1
    return cnt


@njit(cache=True)
def _gershgorin(d, e):
    n = d.size
    lo = np.inf
    hi = -np.inf
    for i in range(n):
        r = 0.0
        if i > 0:
            r += abs(e[i - 1])
        if i < n - 1:
            r += abs(e[i])
        lo = min(lo, d[i] - r)
        hi = max(hi, d[i] + r)
    return lo, hi


@njit(cache=True)
def _bisect_index(d, e, e2, idx, rtol):
    # eigenvalue number idx in ascending order (0-based)
    n = d.size
    lo, hi = _gershgorin(d, e)
    span = max(abs(lo), abs(hi), 1e-300)
    lo -= 2.0 * 2.220446049250313e-16 * span
    hi += 2.0 * 2.220446049250313e-16 * span
    pivmin = 1e-300
    for i in range(n - 1):
        pivmin = max(pivmin, e2[i] * 1e-300)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * max(abs(lo), abs(hi)) + 4.0 * 2.2250738585072014e-308:
            break
        if mid == lo or mid == hi:
            break
        if _sturm_below(d, e2, mid, pivmin) >= idx + 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@njit(cache=True)
def _largest_k(d, e, k, rtol):
    n = d.size
    e2 = e * e
    out = np.empty(k)
    for j in range(k):
        out[j] = _bisect_index(d, e, e2, n - 1 - j, rtol)
    return out


@njit(cache=True)
def _largest_batch(D, E, rtol):
    reps = D.shape[0]
    out = np.empty(reps)
    for r in range(reps):
        d = D[r]
        e = E[r]
        e2 = e * e
        out[r] = _bisect_index(d, e, e2, d.size - 1, rtol)
    return out


@njit(cache=True)
def _tql_batch(D, E):
    reps, n = D.shape
    out = np.empty((reps, n))
    z = np.empty((1, 1))
    for r in range(reps):
        d = D[r].copy()
        e = np.zeros(n)
        e[: n - 1] = E[r]
        if not _tql(d, e, z, False):
            return out, False
        out[r] = np.sort(d)[::-1]
    return out, True


@njit(cache=True)
def _tridiag_solve(d, e, lam, b):
    # (T - lam I) x = b by Thomas elimination; tiny pivots are replaced
    n = d.size
    scale = 0.0
    for i in range(n):
        scale = max(scale, abs(d[i] - lam))
    for i in range(n - 1):
        scale = max(scale, abs(e[i]))
    tiny = 2.220446049250313e-16 * max(scale, 1e-300)
    m = np.empty(n)
    x = b.copy()
    m[0] = d[0] - lam
    if abs(m[0]) < tiny:
        m[0] = tiny
    for i in range(1, n):
        f = e[i - 1] / m[i - 1]
        m[i] = d[i] - lam - f * e[i - 1]
        if abs(m[i]) < tiny:
            m[i] = tiny
        x[i] -= f * x[i - 1]
    x[n - 1] /= m[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = (x[i] - e[i] * x[i + 1]) / m[i]
    return x


def _inverse_iteration(d, e, lam, iters: int = 3) -> np.ndarray:
    n = d.size
    x = np.ones(n) / math.sqrt(n)
    # nudge the shift so the factorization is not exactly singular
    shift = lam + 4 * _EPS * max(abs(lam), 1.0)
    for _ in range(iters):
        x = _tridiag_solve(d, e, shift, x)
        nrm = np.linalg.norm(x)
        if not np.isfinite(nrm) or nrm == 0:
            raise ConvergenceError("inverse iteration broke down")
        x /= nrm
    return x


def truncation_size(N: int) -> int:
    """Leading block size ``ceil(10 N^{1/3})`` capped at ``N``."""
    return min(N, int(math.ceil(10.0 * N ** (1.0 / 3.0) - 1e-9)))


def eig_sym_tridiag(T, mode: str = "full", k: int = 1, vectors: bool = False,
                    rtol: float = 4 * _EPS) -> RealSpectrum:
    """Eigenvalues of a real symmetric tridiagonal matrix.

    Parameters
    ----------
    T : TridiagonalMatrix or tuple (diag, offdiag)
    mode : {"full", "extreme", "truncated"}
        ``"full"`` runs implicit QL on the whole matrix; ``"extreme"`` returns
        the ``k`` largest by bisection; ``"truncated"`` returns the largest
        eigenvalue of the leading ``ceil(10 N^{1/3})`` block.
    vectors : bool
        Return eigenvectors (columns) alongside the values.

    Raises
    ------
    ConvergenceError
        If QL needs more than 60 sweeps for one eigenvalue.
    """
    d, e = _unpack(T)
    n = d.size
    meta = {"solver": f"tridiag-{mode}", "N": n}
    if mode == "truncated":
        n0 = truncation_size(n)
        d, e = d[:n0], e[: n0 - 1]
        mode, k = "extreme", 1
        meta["N0"] = n0
    if mode == "full":
        dd = d.copy()
        ee = np.zeros(n)
        ee[: n - 1] = e
        z = np.eye(n) if vectors else np.empty((1, 1))
        if not _tql(dd, ee, z, vectors):
            raise ConvergenceError("implicit QL did not converge")
        return RealSpectrum(dd, meta, z if vectors else None)
    if mode == "extreme":
        k = min(k, d.size)
        vals = _largest_k(d, e, k, rtol)
        vecs = None
        if vectors:
            vecs = np.column_stack([_inverse_iteration(d, e, v) for v in vals])
        return RealSpectrum(vals, meta, vecs)
    raise ValueError(f"unknown mode {mode!r}")


def largest_eigenvalues(diag: np.ndarray, offdiag: np.ndarray, truncate: bool = False,
                        rtol: float = 4 * _EPS) -> np.ndarray:
    """Largest eigenvalue of each row of a batch of tridiagonal matrices.

    ``diag`` has shape ``(reps, N)`` and ``offdiag`` ``(reps, N-1)``.
    """
    D = np.ascontiguousarray(np.atleast_2d(diag), dtype=float)
    E = np.ascontiguousarray(np.atleast_2d(offdiag), dtype=float)
    if truncate:
        n0 = truncation_size(D.shape[1])
        D = np.ascontiguousarray(D[:, :n0])
        E = np.ascontiguousarray(E[:, : n0 - 1])
    return _largest_batch(D, E, rtol)


def all_eigenvalues(diag: np.ndarray, offdiag: np.ndarray) -> np.ndarray:
    """Full descending spectra of a batch of tridiagonal matrices, shape ``(reps, N)``."""
    D = np.ascontiguousarray(np.atleast_2d(diag), dtype=float)
    E = np.ascontiguousarray(np.atleast_2d(offdiag), dtype=float)
    out, ok = _tql_batch(D, E)
    if not ok:
        raise ConvergenceError("implicit QL did not converge")
    return out


def _unpack(T):
    if hasattr(T, "diag"):
        d, e = T.diag, T.offdiag
    else:
        d, e = T
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    if d.ndim != 1 or e.shape != (max(d.size - 1, 0),):
        raise ValueError("expected one matrix: diag of length N and offdiag of length N-1")
    return d, e
