"""Dense eigensolvers written on top of elementary reflections and rotations.

Hermitian matrices are reduced to real symmetric tridiagonal form by
Householder reflections (a diagonal phase makes complex off-diagonals real)
and handed to :mod:`spectra.spectral.tridiag`.  General complex matrices are
reduced to Hessenberg form and driven to Schur form by single-shift complex
QR with Wilkinson shifts.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from ._types import ComplexSpectrum, ConvergenceError, RealSpectrum
from .tridiag import _inverse_iteration, _largest_k, _tql


@njit(cache=True, fastmath=True)
def _householder_tridiag(A, V):
    # In place on the lower triangle of Hermitian A.  Reflector k is stored in
    # V[k+1:, k] with unit norm; H_k = I - 2 v v^H.
    n = A.shape[0]
    p = np.zeros(n, dtype=A.dtype)
    for k in range(n - 2):
        m0 = k + 1
        sq = 0.0
        for i in range(m0, n):
            sq += abs(A[i, k]) ** 2
        xnorm = np.sqrt(sq)
        if xnorm == 0.0:
            continue
        x0 = A[m0, k]
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 > 0 else 1.0 + 0.0 * x0
        alpha = -phase * xnorm
        vn = np.sqrt(2.0 * xnorm * (xnorm + ax0))
        V[m0, k] = (x0 - alpha) / vn
        for i in range(m0 + 1, n):
            V[i, k] = A[i, k] / vn
        # p = B v with B the trailing block (lower triangle stored)
        for i in range(m0, n):
            p[i] = 0.0
        for i in range(m0, n):
            vi = V[i, k]
            acc = A[i, i] * vi
            for j in range(m0, i):
                aij = A[i, j]
                acc += aij * V[j, k]
                p[j] += np.conj(aij) * vi
            p[i] += acc
        kk = 0.0 + 0.0 * x0
        for i in range(m0, n):
            kk += np.conj(V[i, k]) * p[i]
        # w = p - K v ; B -= 2 (v w^H + w v^H)
        for i in range(m0, n):
            p[i] -= kk * V[i, k]
        for i in range(m0, n):
            vi = V[i, k]
            wi = p[i]
            for j in range(m0, i + 1):
                A[i, j] -= 2.0 * (vi * np.conj(p[j]) + wi * np.conj(V[j, k]))
        A[m0, k] = alpha
        for i in range(m0 + 1, n):
            A[i, k] = 0.0


@njit(cache=True)
def _apply_reflectors(V, X):
    # X <- H_0 H_1 ... H_{n-3} X
    n = V.shape[0]
    for k in range(n - 3, -1, -1):
        for c in range(X.shape[1]):
            s = 0.0 + 0.0 * X[0, c]
            for i in range(k + 1, n):
                s += np.conj(V[i, k]) * X[i, c]
            if s != 0:
                for i in range(k + 1, n):
                    X[i, c] -= 2.0 * V[i, k] * s


def _check_hermitian(H: np.ndarray) -> np.ndarray:
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(np.abs(H).max(), 1e-300)
    if np.abs(H - H.conj().T).max() > 1e-12 * scale:
        raise ValueError("matrix is not Hermitian")
    return H


def hermitian_to_tridiagonal(H: np.ndarray):
    """Reduce a Hermitian matrix to a real symmetric tridiagonal one.

    Returns ``(d, e, V, phases)`` with ``H = Q D T D^H Q^H`` where ``Q`` is the
    product of the stored reflectors and ``D = diag(phases)``.
    """
    H = _check_hermitian(H)
    iscomplex = np.iscomplexobj(H)
    A = np.array(H, dtype=complex if iscomplex else float, order="C")
    n = A.shape[0]
    V = np.zeros_like(A)
    _householder_tridiag(A, V)
    d = np.real(np.diag(A)).copy()
    sub = np.array([A[i + 1, i] for i in range(n - 1)])
    e = np.abs(sub)
    phases = np.ones(n, dtype=A.dtype)
    for i in range(n - 1):
        if e[i] > 0:
            phases[i + 1] = phases[i] * sub[i] / e[i]
        else:
            phases[i + 1] = phases[i]
    return d, e, V, phases


def eig_hermitian_dense(H: np.ndarray, vectors: bool = False, k: int | None = None) -> RealSpectrum:
    """Eigenvalues (and optionally orthonormal eigenvectors) of a Hermitian matrix.

    Parameters
    ----------
    H : (N, N) array
        Real symmetric or complex Hermitian within 1e-12 relative.
    vectors : bool
        Also return eigenvectors as the columns of ``.vectors``.
    k : int, optional
        Only the ``k`` largest eigenpairs (bisection plus inverse iteration).
    """
    d, e, V, phases = hermitian_to_tridiagonal(H)
    n = d.size
    if k is None:
        dd = d.copy()
        ee = np.zeros(n)
        ee[: n - 1] = e
        z = np.eye(n) if vectors else np.empty((1, 1))
        if not _tql(dd, ee, z, vectors):
            raise ConvergenceError("implicit QL did not converge")
        vals = dd
        Y = z if vectors else None
    else:
        k = min(k, n)
        vals = _largest_k(d, e, k, 4 * np.finfo(float).eps)
        Y = np.column_stack([_inverse_iteration(d, e, v) for v in vals]) if vectors else None
    X = None
    if vectors:
        X = np.ascontiguousarray(phases[:, None] * Y.astype(V.dtype))
        _apply_reflectors(V, X)
    return RealSpectrum(vals, {"solver": "householder-ql", "N": n}, X)


def eigvalsh_batch(H: np.ndarray) -> np.ndarray:
    """Descending spectra for a stack of Hermitian matrices, shape ``(reps, N)``."""
    return np.stack([eig_hermitian_dense(h).values for h in H])


# ---------------------------------------------------------------- non-Hermitian


@njit(cache=True)
def _hessenberg(A, Z, want_z):
    n = A.shape[0]
    v = np.zeros(n, dtype=A.dtype)
    for k in range(n - 2):
        m0 = k + 1
        sq = 0.0
        for i in range(m0 + 1, n):
            sq += abs(A[i, k]) ** 2
        if sq == 0.0:
            continue
        sq += abs(A[m0, k]) ** 2
        xnorm = np.sqrt(sq)
        x0 = A[m0, k]
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 > 0 else 1.0 + 0.0j
        alpha = -phase * xnorm
        vn = np.sqrt(2.0 * xnorm * (xnorm + ax0))
        v[m0] = (x0 - alpha) / vn
        for i in range(m0 + 1, n):
            v[i] = A[i, k] / vn
        # left: A[m0:, k:] -= 2 v (v^H A[m0:, k:])
        for j in range(k, n):
            s = 0.0j
            for i in range(m0, n):
                s += np.conj(v[i]) * A[i, j]
            s *= 2.0
            for i in range(m0, n):
                A[i, j] -= v[i] * s
        # right: A[:, m0:] -= 2 (A[:, m0:] v) v^H
        for i in range(n):
            s = 0.0j
            for j in range(m0, n):
                s += A[i, j] * v[j]
            s *= 2.0
            for j in range(m0, n):
                A[i, j] -= s * np.conj(v[j])
        if want_z:
            for i in range(n):
                s = 0.0j
                for j in range(m0, n):
                    s += Z[i, j] * v[j]
                s *= 2.0
                for j in range(m0, n):
                    Z[i, j] -= s * np.conj(v[j])
        for i in range(m0 + 1, n):
            A[i, k] = 0.0


@njit(cache=True)
def _givens(x, y):
    ax = abs(x)
    ay = abs(y)
    if ay == 0.0:
        return 1.0, 0.0j
    if ax == 0.0:
        return 0.0, np.conj(y) / ay
    r = np.sqrt(ax * ax + ay * ay)
    c = ax / r
    s = (x / ax) * np.conj(y) / r
    return c, s


@njit(cache=True)
def _schur_qr(H, Z, want_t, want_z, hnorm):
    # single-shift complex QR on upper Hessenberg H; returns iteration count or -1
    n = H.shape[0]
    eps = 2.220446049250313e-16
    small = 1e-14 * hnorm
    hi = n - 1
    its = 0
    total = 0
    maxtotal = 60 * n + 100
    while hi > 0:
        l = hi
        while l > 0:
            sub = abs(H[l, l - 1])
            if sub <= small or sub <= eps * (abs(H[l, l]) + abs(H[l - 1, l - 1])):
                H[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            hi -= 1
            its = 0
            continue
        its += 1
        total += 1
        if total > maxtotal:
            return -1
        if its % 11 == 10:
            shift = H[hi, hi] + 0.75 * abs(H[hi, hi - 1]) * (1.0 + 0.5j)
        else:
            a = H[hi - 1, hi - 1]
            b = H[hi - 1, hi]
            c = H[hi, hi - 1]
            d = H[hi, hi]
            half = 0.5 * (a - d)
            disc = np.sqrt(half * half + b * c)
            m1 = d - half + disc
            m2 = d - half - disc
            # eigenvalue of the trailing 2x2 block nearest H[hi, hi]
            shift = m1 if abs(m1 - d) < abs(m2 - d) else m2
        jlo = 0 if want_t else l
        jhi = n if want_t else hi + 1
        x = H[l, l] - shift
        y = H[l + 1, l]
        for k in range(l, hi):
            if k > l:
                x = H[k, k - 1]
                y = H[k + 1, k - 1]
            c, s = _givens(x, y)
            cs = np.conj(s)
            start = k - 1 if k > l else k
            for j in range(start, jhi):
                h1 = H[k, j]
                h2 = H[k + 1, j]
                H[k, j] = c * h1 + s * h2
                H[k + 1, j] = -cs * h1 + c * h2
            if k > l:
                H[k + 1, k - 1] = 0.0
            iend = min(k + 2, hi)
            for i in range(jlo, iend + 1):
                h1 = H[i, k]
                h2 = H[i, k + 1]
                H[i, k] = c * h1 + cs * h2
                H[i, k + 1] = -s * h1 + c * h2
            if want_z:
                for i in range(n):
                    z1 = Z[i, k]
                    z2 = Z[i, k + 1]
                    Z[i, k] = c * z1 + cs * z2
                    Z[i, k + 1] = -s * z1 + c * z2
    return total


@njit(cache=True)
def _triangular_eigvecs(T):
    n = T.shape[0]
    Y = np.zeros((n, n), dtype=T.dtype)
    tnorm = 0.0
    for i in range(n):
        for j in range(i, n):
            tnorm = max(tnorm, abs(T[i, j]))
    tiny = 2.220446049250313e-16 * max(tnorm, 1e-300)
    for m in range(n):
        Y[m, m] = 1.0
        lam = T[m, m]
        for j in range(m - 1, -1, -1):
            s = 0.0j
            for q in range(j + 1, m + 1):
                s += T[j, q] * Y[q, m]
            den = T[j, j] - lam
            if abs(den) < tiny:
                den = tiny
            Y[j, m] = -s / den
    return Y


def eig_complex_dense(M: np.ndarray, vectors: bool = False) -> ComplexSpectrum:
    """Eigenvalues of a general complex matrix.

    Parameters
    ----------
    M : (N, N) array
    vectors : bool
        Also compute right eigenvectors (columns of ``.right``, unit norm) and
        left eigenvectors normalized bi-orthogonally, ``left[:, m].conj() @
        right[:, n] = delta_mn``.

    Raises
    ------
    ConvergenceError
        When QR exceeds its sweep budget.
    """
    A = np.array(M, dtype=complex, order="C")
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    n = A.shape[0]
    hnorm = max(np.sqrt(np.sum(np.abs(A) ** 2)), 1e-300)
    Z = np.eye(n, dtype=complex) if vectors else np.empty((1, 1), dtype=complex)
    _hessenberg(A, Z, vectors)
    total = _schur_qr(A, Z, vectors, vectors, hnorm)
    if total < 0:
        raise ConvergenceError("complex QR did not converge")
    vals = np.diag(A).copy()
    meta = {"solver": "hessenberg-qr", "N": n, "sweeps": int(total)}
    if not vectors:
        return ComplexSpectrum(vals, meta)
    Y = _triangular_eigvecs(A)
    R = Z @ Y
    R /= np.linalg.norm(R, axis=0)
    # rows of R^{-1} are the conjugated left eigenvectors
    L = np.linalg.solve(R, np.eye(n, dtype=complex)).conj().T
    return ComplexSpectrum(vals, meta, right=R, left=L)
