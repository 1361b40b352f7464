"""Rank-one secular equations and the identities built on them.

Real case: the zeros of ``1 - b sum_j w_j/(x - mu_j)`` strictly interlace the
poles, one per gap plus one above the largest pole, so each is bracketed and
found by Newton steps safeguarded by bisection.  Complex case: the zeros of
``1 - i alpha sum_j w_j/(z - mu_j)`` are the eigenvalues of
``diag(mu) + i alpha sqrt(w) sqrt(w)^T``; they are found simultaneously with
Aberth corrections on the monic characteristic polynomial, evaluated through
its rational form.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from ._types import ComplexSpectrum, ConvergenceError, OverlapSet, RealSpectrum, SecularProblem


@njit(cache=True)
def _secular_real(mu, w, b, out):
    # mu strictly descending, w > 0, b > 0; returns False on a bracket failure
    m = mu.size
    eps = 2.220446049250313e-16
    total = 0.0
    for j in range(m):
        total += w[j]
    delta = np.empty(m)
    for k in range(m):
        if k == 0:
            lo = mu[0]
            hi = mu[0] + b * total
        else:
            lo = mu[k]
            hi = mu[k - 1]
        # origin at the nearer pole: sign of f at the midpoint
        mid = 0.5 * (lo + hi)
        fm = 1.0
        for j in range(m):
            fm -= b * w[j] / (mid - mu[j])
        if fm >= 0.0 or k == 0:
            origin = lo
            tlo = 0.0
            thi = hi - lo
        else:
            origin = hi
            tlo = lo - hi
            thi = 0.0
        if k == 0 and fm < 0.0:
            tlo = mid - lo
        elif k == 0:
            thi = mid - lo
        for j in range(m):
            delta[j] = mu[j] - origin
        t = 0.5 * (tlo + thi)
        for it in range(300):
            f = 1.0
            df = 0.0
            for j in range(m):
                inv = 1.0 / (t - delta[j])
                f -= b * w[j] * inv
                df += b * w[j] * inv * inv
            if f < 0.0:
                tlo = t
            else:
                thi = t
            tn = t - f / df
            if not (tn > tlo and tn < thi):
                tn = 0.5 * (tlo + thi)
            size = max(abs(origin + tn), abs(origin))
            if abs(tn - t) <= 2.0 * eps * size or thi - tlo <= 2.0 * eps * size:
                t = tn
                break
            t = tn
        x = origin + t
        if k == 0:
            if not (x > mu[0]):
                return False
        elif not (x > mu[k] and x < mu[k - 1]):
            return False
        out[k] = x
    return True


def solve_secular_real(p: SecularProblem) -> RealSpectrum:
    """Zeros of ``1 - b (u0/x + sum_j w_j/(x - mu_j))``.

    The optional pole at zero (weight ``p.pole_at_zero_weight``) is treated as
    one more pole.  Returns one zero per pole, strictly interlacing them, in
    descending order.

    Raises
    ------
    ConvergenceError
        If a zero lands outside its interlacing bracket.
    """
    b = complex(p.coupling)
    if b.imag != 0 or b.real <= 0:
        raise ValueError("real secular problem needs a positive real coupling")
    mu = p.poles
    w = p.weights
    if p.pole_at_zero_weight:
        mu = np.concatenate([mu, [0.0]])
        w = np.concatenate([w, [float(p.pole_at_zero_weight)]])
    order = np.argsort(-mu)
    mu = np.ascontiguousarray(mu[order])
    w = np.ascontiguousarray(w[order])
    out = np.empty(mu.size)
    if not _secular_real(mu, w, b.real, out):
        raise ConvergenceError("secular zero escaped its interlacing bracket")
    return RealSpectrum(out, {"solver": "secular-real", "poles": mu})


@njit(cache=True)
def _secular_complex(mu, w, alpha, z, maxit):
    m = mu.size
    eps = 2.220446049250313e-16
    done = np.zeros(m, dtype=np.bool_)
    for it in range(maxit):
        nd = 0
        for k in range(m):
            if done[k]:
                nd += 1
                continue
            zk = z[k]
            f = 1.0 + 0.0j
            df = 0.0j
            poles = 0.0j
            for j in range(m):
                inv = 1.0 / (zk - mu[j])
                f -= 1j * alpha * w[j] * inv
                df += 1j * alpha * w[j] * inv * inv
                poles += inv
            if f == 0:
                done[k] = True
                continue
            # P'/P for P(z) = f(z) prod_j (z - mu_j)
            lp = df / f + poles
            acc = 0.0j
            for j in range(m):
                if j != k:
                    acc += 1.0 / (zk - z[j])
            den = lp - acc
            step = 1.0 / den
            z[k] = zk - step
            if abs(step) <= 8.0 * eps * max(abs(z[k]), 1e-300):
                done[k] = True
        if nd == m:
            return it
    return -1


@njit(cache=True)
def _secular_complex_residual(mu, w, alpha, z):
    worst = 0.0
    for k in range(z.size):
        f = 1.0 + 0.0j
        size = 1.0
        for j in range(mu.size):
            d = z[k] - mu[j]
            term = 1j * alpha * w[j] / d
            f -= term
            # rounding of z_k itself moves each term by |term| eps |z_k|/|d|
            size += abs(term) * max(1.0, abs(z[k]) / abs(d))
        worst = max(worst, abs(f) / size)
    return worst


def solve_secular_complex(p: SecularProblem, maxit: int = 500) -> ComplexSpectrum:
    """Zeros of ``1 - i alpha sum_j w_j/(z - mu_j)``.

    Seeds are the first-order positions ``mu_j + i alpha w_j``.  All zeros lie
    in the upper half plane and their imaginary parts sum to
    ``alpha * sum_j w_j``.

    Raises
    ------
    ConvergenceError
        If the residual, relative to its rounding-level size at the
        computed zeros, exceeds 1e-9 after ``maxit`` sweeps.
    """
    c = complex(p.coupling)
    alpha = c.imag if c.real == 0 and c.imag != 0 else c.real
    if c.real != 0 and c.imag != 0:
        raise ValueError("coupling must be real alpha or purely imaginary i*alpha")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    mu = np.ascontiguousarray(p.poles, dtype=float)
    w = np.ascontiguousarray(p.weights, dtype=float)
    z = mu + 1j * alpha * w
    _secular_complex(mu, w, alpha, z, maxit)
    res = _secular_complex_residual(mu, w, alpha, z)
    if res > 1e-9:
        raise ConvergenceError(f"secular residual {res:.3g} after {maxit} sweeps")
    return ComplexSpectrum(z, {"solver": "secular-complex", "alpha": alpha, "residual": res})


def scattering_s(E: complex, alpha: float, A_eigs, v) -> tuple[complex, complex]:
    """Scattering amplitude ``s(E)`` evaluated two ways.

    Parameters
    ----------
    E : complex
        Energy, away from the poles and the zeros.
    alpha : float
        Coupling.
    A_eigs : RealSpectrum or array
        Eigenvalues of the unperturbed Hermitian matrix.
    v : array or UnitVector
        Coupling vector expressed in the eigenbasis of ``A``.

    Returns
    -------
    (resolvent_form, product_form)
        ``(1 + iK)/(1 - iK)`` with ``K = alpha v^H (E - A)^{-1} v``, and
        ``prod_j (E - conj(z_j))/(E - z_j)`` over the perturbed eigenvalues.
    """
    mu = np.asarray(A_eigs, dtype=float)
    w = np.abs(np.asarray(v)) ** 2
    if np.any(np.isclose(E, mu, rtol=0, atol=1e-14)):
        raise ValueError("E sits on a pole")
    K = alpha * np.sum(w / (E - mu))
    resolvent = (1 + 1j * K) / (1 - 1j * K)
    z = solve_secular_complex(SecularProblem(mu, w, alpha)).values
    if np.any(np.isclose(E, z, rtol=0, atol=1e-14)):
        raise ValueError("E sits on a zero of the scattering matrix")
    product = np.prod((E - z.conj()) / (E - z))
    return complex(resolvent), complex(product)


def overlaps_from_eigs(spec, full: bool = False) -> OverlapSet:
    """Eigenvector overlaps of ``A + i alpha v v^H`` from its eigenvalues alone.

    ``O_nn = prod_{k != n} |(z_n - conj z_k)/(z_n - z_k)|^2``; with ``full``
    the off-diagonal ``O_mn`` are filled in as well.
    """
    z = np.asarray(spec, dtype=complex)
    n = z.size
    if np.any(z.imag == 0):
        raise ValueError("eigenvalues must have nonzero imaginary part")
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(np.abs(diff) < 1e-14 * max(np.abs(z).max(), 1.0)):
        raise ValueError("coincident eigenvalues")
    cross = z[:, None] - z.conj()[None, :]
    ratio = cross / diff
    np.fill_diagonal(ratio, 1.0)
    diag = np.prod(np.abs(ratio) ** 2, axis=1)
    off = None
    if full:
        # O_mn = (z_n - conj z_n)(z_m - conj z_m) / (z_n - conj z_m)^2
        #        * prod_{k != n} (z_n - conj z_k)/(z_n - z_k)
        #        * prod_{k != m} (conj z_m - z_k)/(conj z_m - conj z_k)
        pn = np.prod(ratio, axis=1)
        im2 = z - z.conj()
        off = (im2[None, :] * im2[:, None] / (z[None, :] - z.conj()[:, None]) ** 2
               * pn[None, :] * pn.conj()[:, None])
        off[np.diag_indices(n)] = diag
    return OverlapSet(z, diag, off)


def first_component_product(sigma, mu) -> np.ndarray:
    """Squared first components of the eigenvectors from two interlacing spectra.

    ``sigma`` are the ``N`` eigenvalues of a Hermitian matrix, ``mu`` the
    ``N-1`` eigenvalues of the minor with the first row and column removed.
    Returns ``|x_j^{(1)}|^2 = prod_i (sigma_j - mu_i) / prod_{i != j}
    (sigma_j - sigma_i)`` in the descending order of ``sigma``.
    """
    s = np.sort(np.asarray(sigma, dtype=float))[::-1]
    m = np.sort(np.asarray(mu, dtype=float))[::-1]
    if m.size != s.size - 1:
        raise ValueError("mu must have one fewer value than sigma")
    if not (np.all(s[:-1] > m) and np.all(m > s[1:])):
        raise ValueError("sigma and mu do not interlace strictly")
    out = np.empty(s.size)
    for j in range(s.size):
        others = np.delete(s, j)
        out[j] = np.prod(s[j] - m) / np.prod(s[j] - others)
    return out
