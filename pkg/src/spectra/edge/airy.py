"""Airy function ``Ai`` and its derivative on the real line.

Four regimes:

* ``-6 <= x <= 2``: Maclaurin series.
* ``x > 10``: exponentially small asymptotic expansion.
* ``2 < x <= 10``: Taylor steps of the Airy equation leftward from the
  asymptotic values at ``x = 12``, avoiding both the cancellation in the
  series and the truncation error of the expansion.
* ``-10 <= x < -6``: Taylor steps of the Airy equation started from the
  series values at ``x = -6``.
* ``x < -10``: oscillatory asymptotic expansion.
"""
from __future__ import annotations

import math

import numpy as np

_AI0 = 0.355028053887817239260063186004  # 3^{-2/3} / Gamma(2/3)
_AIP0 = 0.258819403792806798405183560189  # 3^{-1/3} / Gamma(1/3)


def _uk(n: int) -> np.ndarray:
    # u_k = Gamma(3k + 1/2) / (54^k k! Gamma(k + 1/2)), by the ratio recurrence
    u = np.empty(n)
    u[0] = 1.0
    for k in range(1, n):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
    return u


_U = _uk(40)
_V = np.array([1.0] + [-(6 * k + 1) / (6 * k - 1) * _U[k] for k in range(1, 40)])


_NS = 48
_A = np.empty(_NS)
_B = np.empty(_NS)
_A[0] = _B[0] = 1.0
for _k in range(1, _NS):
    _A[_k] = _A[_k - 1] / ((3 * _k - 1) * (3 * _k))
    _B[_k] = _B[_k - 1] / ((3 * _k) * (3 * _k + 1))
_K = np.arange(_NS)


def _horner(c: np.ndarray, X: np.ndarray) -> np.ndarray:
    out = np.full_like(X, c[-1])
    for ck in c[-2::-1]:
        out = out * X + ck
    return out


def _series(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Ai = c1 f - c2 g with f = sum a_k x^{3k}, g = sum b_k x^{3k+1}
    X = x ** 3
    f = _horner(_A, X)
    g = x * _horner(_B, X)
    fp = x * x * _horner(3.0 * _K[1:] * _A[1:], X)
    gp = _horner((3.0 * _K + 1.0) * _B, X)
    return _AI0 * f - _AIP0 * g, _AI0 * fp - _AIP0 * gp


def _pos_asym(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    zeta = 2.0 / 3.0 * x ** 1.5
    su = np.zeros_like(x)
    sv = np.zeros_like(x)
    p = np.ones_like(x)
    for k in range(25):
        su += p * _U[k]
        sv += p * _V[k]
        p = -p / zeta
    e = np.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    return e * su / x ** 0.25, -e * sv * x ** 0.25


def _neg_asym(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    z = -x
    zeta = 2.0 / 3.0 * z ** 1.5
    pe = np.zeros_like(z)
    po = np.zeros_like(z)
    qe = np.zeros_like(z)
    qo = np.zeros_like(z)
    for k in range(15):
        s = (-1.0) ** k
        pe += s * _U[2 * k] / zeta ** (2 * k)
        po += s * _U[2 * k + 1] / zeta ** (2 * k + 1)
        qe += s * _V[2 * k] / zeta ** (2 * k)
        qo += s * _V[2 * k + 1] / zeta ** (2 * k + 1)
    th = zeta - math.pi / 4.0
    c, sn = np.cos(th), np.sin(th)
    k0 = 1.0 / math.sqrt(math.pi)
    ai = k0 * z ** -0.25 * (c * pe + sn * po)
    aip = k0 * z ** 0.25 * (sn * qe - c * qo)
    return ai, aip


def _taylor_from(x0: float, y0: float, d0: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # march from x0 to every target in steps of at most 0.5 with the Taylor
    # series of y'' = t y; a_{k+2} = (xc a_k + a_{k-1}) / ((k+2)(k+1))
    xc = np.full_like(x, x0)
    y = np.full_like(x, y0)
    d = np.full_like(x, d0)
    while True:
        h = np.clip(x - xc, -0.5, 0.5)
        if not np.any(h):
            return y, d
        am1 = np.zeros_like(x)
        a0, a1 = y, d
        yn = a0 + a1 * h
        dn = a1.copy()
        hp = h.copy()
        for k in range(0, 58):
            a2 = (xc * a0 + am1) / ((k + 2) * (k + 1))
            dn = dn + (k + 2) * a2 * hp
            hp = hp * h
            yn = yn + a2 * hp
            am1, a0, a1 = a0, a1, a2
        y, d, xc = yn, dn, xc + h


_ANCHORS: dict = {}


def _anchor(x0: float) -> tuple[float, float]:
    if x0 not in _ANCHORS:
        fn = _series if abs(x0) <= 6 else _pos_asym
        a, d = fn(np.array([x0]))
        _ANCHORS[x0] = (float(a[0]), float(d[0]))
    return _ANCHORS[x0]


def airy(x):
    """``(Ai(x), Ai'(x))`` for real ``x`` (scalar or array).

    Absolute error is below about 1e-12 for ``x >= -10``.
    """
    xa = np.asarray(x, dtype=float)
    flat = np.atleast_1d(xa).ravel()
    ai = np.empty_like(flat)
    aip = np.empty_like(flat)
    m_ser = (flat >= -6.0) & (flat <= 2.0)
    m_rgt = (flat > 2.0) & (flat <= 10.0)
    m_pos = flat > 10.0
    m_mid = (flat < -6.0) & (flat >= -10.0)
    m_neg = flat < -10.0
    if m_ser.any():
        ai[m_ser], aip[m_ser] = _series(flat[m_ser])
    if m_pos.any():
        ai[m_pos], aip[m_pos] = _pos_asym(flat[m_pos])
    if m_neg.any():
        ai[m_neg], aip[m_neg] = _neg_asym(flat[m_neg])
    if m_mid.any():
        ai[m_mid], aip[m_mid] = _taylor_from(-6.0, *_anchor(-6.0), flat[m_mid])
    if m_rgt.any():
        # leftward marching from x = 12 follows the growing direction of Ai: stable
        ai[m_rgt], aip[m_rgt] = _taylor_from(12.0, *_anchor(12.0), flat[m_rgt])
    if xa.ndim == 0:
        return float(ai[0]), float(aip[0])
    return ai.reshape(xa.shape), aip.reshape(xa.shape)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(80)


def airy_tail_integral(x: float, power: int = 0, squared: bool = False, width: float = 12.0) -> float:
    """``int_x^inf (t - x)^power Ai(t)^{1 or 2} dt`` for ``x >= 0`` by Gauss-Legendre on ``(x, x + width)``.

    ``Ai`` decays like ``exp(-2/3 t^{3/2})``, so the truncation is far below
    double precision for ``x >= 0``.
    """
    t = x + 0.5 * width * (_GL_X + 1.0)
    a, _ = airy(t)
    f = a * a if squared else a
    return float(0.5 * width * np.sum(_GL_W * f * (t - x) ** power))
