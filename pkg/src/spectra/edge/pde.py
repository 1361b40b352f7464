"""Residuals of the edge-regime partial differential equations, and CDF curves."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _check_grid(a: np.ndarray, b: np.ndarray, F: np.ndarray) -> None:
    if a.size < 5 or b.size < 5:
        raise ValueError("need at least 5 grid points per axis")
    if F.shape != (a.size, b.size):
        raise ValueError("F must have shape (len(axis0), len(axis1))")
    for g in (a, b):
        if np.any(np.diff(g) <= 0):
            raise ValueError("grids must be strictly ascending")


def _d1(F, h, axis):
    return (np.take(F, range(2, F.shape[axis]), axis) - np.take(F, range(0, F.shape[axis] - 2), axis)) / (2 * h)


def _d2(F, h, axis):
    n = F.shape[axis]
    return (np.take(F, range(2, n), axis) - 2 * np.take(F, range(1, n - 1), axis)
            + np.take(F, range(0, n - 2), axis)) / (h * h)


def pde_residual(which: str, F, axis0, axis1, *, beta: float = 2.0, a: float = 0.0,
                 derivatives: dict | None = None) -> float:
    """Maximum absolute PDE residual over the interior of a rectangular grid.

    ``which="soft"``: ``F_x + (2/beta) F_ww + (x - w^2) F_w`` with ``F[i, j]`` at
    ``(x_i, w_j)``.

    ``which="hard"``: ``-x F_x + (2/beta) c^2 F_cc + (((2/beta)(a + 2) - 1) c - c^2 - x) F_c``
    with ``F[i, j]`` at ``(x_i, c_j)``.

    Derivatives are second-order central differences on a uniform grid
    unless ``derivatives`` supplies arrays ``Fx``, ``Fy`` (first derivative
    in the second variable) and ``Fyy`` on the full grid, in which case the
    residual is taken over every grid point.
    """
    F = np.asarray(F, dtype=float)
    x = np.asarray(axis0, dtype=float)
    y = np.asarray(axis1, dtype=float)
    _check_grid(x, y, F)
    if which not in ("soft", "hard"):
        raise ValueError("which must be 'soft' or 'hard'")
    if derivatives is not None:
        Fx, Fy, Fyy = (np.asarray(derivatives[k], dtype=float) for k in ("Fx", "Fy", "Fyy"))
        X, Y = np.meshgrid(x, y, indexing="ij")
    else:
        hx = np.diff(x)
        hy = np.diff(y)
        if np.ptp(hx) > 1e-9 * hx.mean() or np.ptp(hy) > 1e-9 * hy.mean():
            raise ValueError("finite differences need uniform grids")
        Fx = _d1(F, hx.mean(), 0)[:, 1:-1]
        Fy = _d1(F, hy.mean(), 1)[1:-1, :]
        Fyy = _d2(F, hy.mean(), 1)[1:-1, :]
        X, Y = np.meshgrid(x[1:-1], y[1:-1], indexing="ij")
    if which == "soft":
        res = Fx + (2.0 / beta) * Fyy + (X - Y * Y) * Fy
    else:
        res = -X * Fx + (2.0 / beta) * Y * Y * Fyy + (((2.0 / beta) * (a + 2.0) - 1.0) * Y - Y * Y - X) * Fy
    return float(np.abs(res).max())


@dataclass
class DistributionCurve:
    """A tabulated distribution function with optional density."""

    s_grid: np.ndarray
    cdf: np.ndarray
    pdf: np.ndarray | None = None

    def __post_init__(self) -> None:
        if np.any(np.diff(self.cdf) < -1e-12):
            raise ValueError("cdf must be nondecreasing")
        if np.any(self.cdf < -1e-12) or np.any(self.cdf > 1 + 1e-12):
            raise ValueError("cdf values must lie in [0, 1]")

    def __call__(self, s):
        return np.interp(s, self.s_grid, self.cdf, left=0.0, right=1.0)


def tw_curve(beta: int, s_grid=None) -> DistributionCurve:
    """Tracy-Widom CDF and density (density from the spline derivative)."""
    from .painleve import default_table, tw_cdf

    t = default_table()
    s = np.linspace(-8.0, 6.0, 1401) if s_grid is None else np.asarray(s_grid, dtype=float)
    F = tw_cdf(beta, s, t)
    # d/ds exp(-I2) etc. via the spline derivatives of I1, I2
    dI1 = t._spl["I1"](s, 1)
    dI2 = t._spl["I2"](s, 1)
    if beta == 2:
        pdf = -dI2 * F
    elif beta == 1:
        pdf = (-0.5 * dI2 - 0.5 * dI1) * F
    else:
        I1 = t("I1", s)
        pdf = np.exp(-0.5 * t("I2", s)) * (-0.5 * dI2 * np.cosh(0.5 * I1) + 0.5 * dI1 * np.sinh(0.5 * I1))
    return DistributionCurve(s, np.asarray(F), np.asarray(pdf))


def crit_curve(beta: int, w: float, s_grid=None) -> DistributionCurve:
    """Critical-regime CDF ``F_{beta, w}`` and its density on a grid."""
    from .painleve import crit_cdf, default_field

    fld = default_field()
    s = np.linspace(-8.0, 6.0, 1401) if s_grid is None else np.asarray(s_grid, dtype=float)
    F = crit_cdf(beta, w, s, fld)
    pdf = fld._spl[beta].ev(s, np.full_like(s, w), dx=1)
    return DistributionCurve(s, np.clip(F, 0.0, 1.0), pdf)
