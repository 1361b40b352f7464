"""Deformed Airy kernel and the Fredholm determinant of the critical regime."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .airy import airy

_PX, _PW = np.polynomial.legendre.leggauss(24)


def _panels(lo: np.ndarray, hi: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # nodes and weights of n-panel composite 24-point Gauss-Legendre, one row per interval
    edges = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, n + 1)[None, :]
    mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
    half = 0.5 * (edges[:, 1:] - edges[:, :-1])
    t = mid[:, :, None] + half[:, :, None] * _PX[None, None, :]
    wt = half[:, :, None] * _PW[None, None, :]
    return t.reshape(lo.size, -1), wt.reshape(lo.size, -1)


def airy_tail_term(x, w: float):
    """``T(x; w) = int_{-inf}^x exp(-w (x - t)) Ai(t) dt`` for ``w >= 0``.

    For ``w < 1.5`` the complement of ``int_{-inf}^{inf} exp(w t) Ai(t) dt =
    exp(w^3/3)`` is used (at ``w = 0`` this is ``1 - int_x^inf Ai``); for larger
    ``w`` the damped integral is evaluated directly.  Composite Gauss-Legendre
    with panels no longer than 1.
    """
    if w < 0:
        raise ValueError("w must be non-negative")
    xa = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if np.isinf(w):
        out = np.zeros_like(xa)
    elif w < 1.5:
        hi = np.maximum(xa, 0.0) + 14.0
        n = int(np.ceil((hi - xa).max()))
        t, wt = _panels(xa, hi, n)
        tail = np.sum(wt * np.exp(w * (t - xa[:, None])) * airy(t)[0], axis=1)
        out = np.exp(w ** 3 / 3.0 - w * xa) - tail
    else:
        U = 40.0 / w
        n = max(4, int(np.ceil(U)))
        u, wt = _panels(np.zeros(1), np.array([U]), n)
        out = np.sum(wt * np.exp(-w * u) * airy(xa[:, None] - u)[0], axis=1)
    return out.reshape(np.shape(x)) if np.ndim(x) else float(out[0])


def airy_kernel(x, y):
    """``K_soft(x, y) = (Ai(x) Ai'(y) - Ai(y) Ai'(x)) / (x - y)``, diagonal ``Ai'(x)^2 - x Ai(x)^2``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ax, dx = airy(x)
    ay, dy = airy(y)
    X, Y = np.broadcast_arrays(x, y)
    AX, AY = np.broadcast_arrays(ax, ay)
    DX, DY = np.broadcast_arrays(dx, dy)
    same = X == Y
    den = np.where(same, 1.0, X - Y)
    out = np.where(same, DX * DX - X * AX * AX, (AX * DY - AY * DX) / den)
    return out if out.ndim else float(out)


def deformed_airy_kernel(x, y, w: float):
    """``K_soft(x, y) + Ai(y) int_{-inf}^x exp(-w (x - t)) Ai(t) dt`` for ``w >= 0`` (``w = inf`` allowed)."""
    if w < 0:
        raise ValueError("the kernel representation requires w >= 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    tx = airy_tail_term(x, w)
    ay, _ = airy(y)
    out = airy_kernel(x, y) + ay * tx
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class FredholmConfig:
    """Nystrom discretization: ``m`` Gauss-Legendre nodes on ``(s, s + L)``."""

    m: int = 64
    L: float = 12.0

    def __post_init__(self) -> None:
        if self.m < 8:
            raise ValueError("m must be >= 8")
        if self.L < 6:
            raise ValueError("L must be >= 6")


def fredholm_f2w(w: float, s: float, cfg: FredholmConfig | None = None) -> float:
    """``det(I - K)`` for the deformed Airy kernel on ``(s, inf)``.

    Nystrom discretization on ``(s, s + L)`` with symmetric square-root
    weights; the determinant is taken by LU.  ``w = inf`` gives the undeformed
    Airy-kernel determinant.
    """
    cfg = cfg or FredholmConfig()
    if w < 0:
        raise ValueError("w must be non-negative")
    xg, wg = np.polynomial.legendre.leggauss(cfg.m)
    x = s + 0.5 * cfg.L * (xg + 1.0)
    sw = np.sqrt(0.5 * cfg.L * wg)
    K = airy_kernel(x[:, None], x[None, :])
    if not np.isinf(w):
        T = airy_tail_term(x, w)
        a, _ = airy(x)
        K = K + T[:, None] * a[None, :]
    A = np.eye(cfg.m) - sw[:, None] * K * sw[None, :]
    return float(np.linalg.det(A))
