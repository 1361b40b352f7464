"""Polynomial roots by Aberth-Ehrlich simultaneous iteration."""
from __future__ import annotations

import numpy as np
from numba import njit

from ._types import ComplexSpectrum, ConvergenceError


@njit(cache=True, fastmath=True)
def _newton_ratio(c, z):
    # p(z)/p'(z) for ascending coefficients c; reversed evaluation off the unit disk
    n = c.size - 1
    if abs(z) <= 1.0:
        p = c[n]
        dp = 0.0j
        for j in range(n - 1, -1, -1):
            dp = dp * z + p
            p = p * z + c[j]
        if dp == 0:
            return p / 1e-300
        return p / dp
    w = 1.0 / z
    q = c[0]
    dq = 0.0j
    for j in range(1, n + 1):
        dq = dq * w + q
        q = q * w + c[j]
    # p(z) = z^n q(w), p'(z) = z^{n-1} (n q(w) - w q'(w))
    den = n * q - w * dq
    if den == 0:
        return q / 1e-300
    return z * q / den


@njit(cache=True, fastmath=True)
def _residual(c, z):
    # |p(z)| and sum |c_j||z|^j, with the same reversal as above
    n = c.size - 1
    if abs(z) <= 1.0:
        p = c[n]
        s = abs(c[n])
        az = abs(z)
        for j in range(n - 1, -1, -1):
            p = p * z + c[j]
            s = s * az + abs(c[j])
        return abs(p), s
    w = 1.0 / z
    aw = abs(w)
    q = c[0]
    s = abs(c[0])
    for j in range(1, n + 1):
        q = q * w + c[j]
        s = s * aw + abs(c[j])
    return abs(q), s


@njit(cache=True, fastmath=True)
def _aberth(c, z, maxit):
    n = z.size
    eps = 2.220446049250313e-16
    done = np.zeros(n, dtype=np.bool_)
    for it in range(maxit):
        nd = 0
        for k in range(n):
            if done[k]:
                nd += 1
                continue
            zk = z[k]
            r = _newton_ratio(c, zk)
            acc = 0.0j
            for j in range(n):
                if j != k:
                    acc += 1.0 / (zk - z[j])
            den = 1.0 - r * acc
            step = r / den if den != 0 else r
            z[k] = zk - step
            res, scale = _residual(c, z[k])
            if abs(step) <= 4.0 * eps * abs(z[k]) or res <= 4.0 * eps * scale * (n + 1):
                done[k] = True
        if nd == n:
            return it
    for k in range(n):
        if not done[k]:
            return -1
    return maxit


def _initial_guesses(c: np.ndarray) -> np.ndarray:
    """Circles from the upper convex hull of ``(j, log|c_j|)``."""
    n = c.size - 1
    mag = np.abs(c)
    with np.errstate(divide="ignore"):
        lg = np.where(mag > 0, np.log(mag), -np.inf)
    pts = [j for j in range(n + 1) if np.isfinite(lg[j])]
    hull: list[int] = []
    for j in pts:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # drop b if it lies on or below the chord a-j
            if (lg[b] - lg[a]) * (j - a) <= (lg[j] - lg[a]) * (b - a):
                hull.pop()
            else:
                break
        hull.append(j)
    z = np.empty(n, dtype=complex)
    pos = 0
    sigma = 0.7
    for a, b in zip(hull[:-1], hull[1:]):
        m = b - a
        r = np.exp((lg[a] - lg[b]) / m)
        ang = 2 * np.pi * np.arange(m) / m + 2 * np.pi * a / n + sigma
        z[pos:pos + m] = r * np.exp(1j * ang)
        pos += m
    return z


def roots_aberth(coeffs, maxit: int = 500, tol: float = 1e-10) -> ComplexSpectrum:
    """All roots of ``c[0] + c[1] z + ... + c[n] z^n``.

    Parameters
    ----------
    coeffs : array_like
        Coefficients in ascending powers (numpy.polynomial order).
    maxit : int
        Sweep budget.
    tol : float
        Required backward error ``|p(r)| <= tol * sum_j |c_j| |r|^j``.

    Raises
    ------
    ConvergenceError
        If some root has not converged after ``maxit`` sweeps, or the final
        residual contract fails.  No partial result is returned.
    """
    c = np.array(coeffs, dtype=complex)
    if c.ndim != 1 or c.size < 2:
        raise ValueError("need a polynomial of degree >= 1")
    if c[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    # exact zero roots from vanishing low-order coefficients
    nz = 0
    while c[nz] == 0:
        nz += 1
    c = c[nz:]
    roots = np.zeros(nz, dtype=complex)
    if c.size > 1:
        z = _initial_guesses(c)
        it = _aberth(c, z, maxit)
        if it < 0:
            raise ConvergenceError("Aberth iteration stalled")
        for zz in z:
            res, scale = _residual(c, zz)
            if res > tol * scale:
                raise ConvergenceError(f"root residual {res / scale:.3g} exceeds {tol}")
        roots = np.concatenate([roots, z])
    return ComplexSpectrum(roots, {"solver": "aberth", "degree": int(c.size - 1 + nz)})
