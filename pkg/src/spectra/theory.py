"""Closed-form limit laws for rank-one perturbations.

Bulk laws, their Stieltjes transforms, outlier locations and thresholds,
limiting eigenvector overlaps, the a = 0 hard-edge gap probability, and two
finite-N identities for beta = 2 (the spiked GUE joint density and the rank-one
HCIZ integral).

Normalizations
--------------
* Semicircle: support [-1, 1], density ``(2/pi) sqrt(1 - x^2)``.
* Marchenko-Pastur with ratio ``gamma = n/N >= 1``: eigenvalues of the
  ``n x n`` matrix ``X1 X1^H`` divided by ``N``; support
  ``((1 - sqrt gamma)^2, (1 + sqrt gamma)^2)`` plus an atom ``1 - 1/gamma`` at
  zero.  Outlier locations for the spiked Wishart model are quoted in units of
  ``n``, where the bulk edge is ``(1 + 1/sqrt gamma)^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, optimize


@dataclass(frozen=True)
class BulkLaw:
    """Limiting spectral law.

    Parameters
    ----------
    kind : {"semicircle", "marchenko_pastur"}
    gamma : float
        Aspect ratio ``n/N >= 1`` (Marchenko-Pastur only).
    """

    kind: str
    gamma: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("semicircle", "marchenko_pastur"):
            raise ValueError(f"unknown law {self.kind!r}")
        if self.kind == "marchenko_pastur" and self.gamma < 1:
            raise ValueError("gamma must be >= 1")

    @classmethod
    def semicircle(cls) -> "BulkLaw":
        return cls("semicircle")

    @classmethod
    def marchenko_pastur(cls, gamma: float) -> "BulkLaw":
        return cls("marchenko_pastur", float(gamma))

    @property
    def support(self) -> tuple[float, float]:
        if self.kind == "semicircle":
            return (-1.0, 1.0)
        r = math.sqrt(self.gamma)
        return ((1 - r) ** 2, (1 + r) ** 2)

    @property
    def atom_at_zero(self) -> float:
        if self.kind == "semicircle":
            return 0.0
        return 1.0 - 1.0 / self.gamma


@dataclass(frozen=True)
class OutlierPrediction:
    """Large-N outlier data for a rank-one perturbation.

    Attributes
    ----------
    threshold : float
        Coupling above which an eigenvalue separates from the bulk.
    location : float or None
        Position of the separated eigenvalue (``None`` at or below threshold).
    overlap : float
        Squared overlap of the top eigenvector with the perturbation direction,
        by the closed formula in its customary form (semicircle: transition at
        coupling 1; Wishart: ratio entering as ``gamma``).
    overlap_selfconsistent : float
        The same overlap computed in the normalization of ``location``: from
        ``G(y)^2 / (-G'(y))`` for the semicircle, and with the aspect ratio
        entering as ``1/gamma`` for the Wishart case.  This is the value a
        simulation of the sampled models converges to.
    """

    threshold: float
    location: float | None
    overlap: float
    overlap_selfconsistent: float


def bulk_density(law: BulkLaw, x):
    """Continuous part of the bulk density (zero outside the support)."""
    x = np.asarray(x, dtype=float)
    lo, hi = law.support
    inside = (x > lo) & (x < hi)
    out = np.zeros_like(x)
    if law.kind == "semicircle":
        out[inside] = (2.0 / np.pi) * np.sqrt(1.0 - x[inside] ** 2)
    else:
        xi = x[inside]
        out[inside] = np.sqrt((xi - lo) * (hi - xi)) / (2.0 * np.pi * law.gamma * xi)
    return out if out.ndim else float(out)


def stieltjes(law: BulkLaw, y):
    """``G(y) = int rho(x)/(y - x) dx`` for ``y`` at or above the upper edge, atom included."""
    y = np.asarray(y, dtype=float)
    if np.any(y < law.support[1]):
        raise ValueError("y must not lie below the upper edge of the support")
    if law.kind == "semicircle":
        # 2y(1 - sqrt(1 - 1/y^2)) written without cancellation
        g = 2.0 / (y * (1.0 + np.sqrt(1.0 - 1.0 / y ** 2)))
    else:
        gam = law.gamma
        lo, hi = law.support
        # 1 - 2(gam+1)/y + (gam-1)^2/y^2 factored through the edges
        disc = np.sqrt((y - lo) * (y - hi)) / y
        g = (1.0 - (gam - 1.0) / y - disc) / (2.0 * gam) + law.atom_at_zero / y
    return g if g.ndim else float(g)


def stieltjes_quadrature(law: BulkLaw, y: float) -> float:
    """Adaptive-quadrature evaluation of the Stieltjes transform (reference route)."""
    lo, hi = law.support
    val, _ = integrate.quad(lambda x: bulk_density(law, x) / (y - x), lo, hi,
                            epsabs=1e-14, epsrel=1e-13, limit=200)
    return val + law.atom_at_zero / y


def _stieltjes_derivative(law: BulkLaw, y: float, h: float = 1e-5) -> float:
    return (stieltjes(law, y + h) - stieltjes(law, y - h)) / (2 * h)


def outlier_from_stieltjes(law: BulkLaw, coupling: float, G=None) -> tuple[float, float | None]:
    """Threshold and location from the level set ``G(y) = 1/c_eff`` by root search.

    For the semicircle ``c_eff`` is the coupling.  For Marchenko-Pastur the
    spike enters the secular equation multiplied by ``gamma`` and the root is
    converted back to units of ``n``.  ``G`` may be any callable transform
    (defaults to :func:`stieltjes`).
    """
    G = G or (lambda y: stieltjes(law, y))
    edge = law.support[1]
    scale = 1.0 if law.kind == "semicircle" else law.gamma
    g_edge = G(edge)
    threshold = 1.0 / (scale * g_edge)
    target = 1.0 / (scale * coupling)
    if coupling <= threshold:
        return threshold, None
    hi = edge + 1.0
    while G(hi) > target:
        hi = edge + 2.0 * (hi - edge)
    y = optimize.brentq(lambda t: G(t) - target, edge, hi,
                        xtol=1e-15, rtol=1e-15, maxiter=500)
    return threshold, y / scale


def outlier_prediction(law: BulkLaw, coupling: float) -> OutlierPrediction:
    """Threshold, location and eigenvector overlap of the separated eigenvalue.

    Semicircle (additive coupling ``alpha``): threshold 1/2, location
    ``alpha + 1/(4 alpha)``.  Marchenko-Pastur (multiplicative spike ``b``):
    threshold ``1 + 1/sqrt(gamma)``, location ``b (1 + gamma^{-1}/(b - 1))`` in
    units of ``n``.  The threshold is where the location formula meets the bulk
    edge ``(1 + 1/sqrt(gamma))^2``.
    """
    if coupling <= 0:
        raise ValueError("coupling must be positive")
    if law.kind == "semicircle":
        a = float(coupling)
        threshold = 0.5
        location = a + 1.0 / (4.0 * a) if a > threshold else None
        overlap = max(0.0, 1.0 - 1.0 / a ** 2)
        sc = max(0.0, 1.0 - 1.0 / (4.0 * a * a)) if a > threshold else 0.0
        return OutlierPrediction(threshold, location, overlap, sc)
    b = float(coupling)
    gam = law.gamma
    threshold = 1.0 + 1.0 / math.sqrt(gam)
    location = b * (1.0 + (1.0 / gam) / (b - 1.0)) if b > threshold else None

    def paul(r: float) -> float:
        if b <= 1:
            return 0.0
        return max(0.0, ((b - 1) ** 2 - r) / ((b - 1) ** 2 + r * (b - 1)))

    overlap = paul(gam) if b > 1 + math.sqrt(gam) else 0.0
    sc = paul(1.0 / gam) if b > threshold else 0.0
    return OutlierPrediction(threshold, location, overlap, sc)


def overlap_from_stieltjes(law: BulkLaw, coupling: float) -> float:
    """Semicircle overlap ``G(y)^2 / (-G'(y))`` at the outlier location (numerical route)."""
    if law.kind != "semicircle":
        raise ValueError("additive overlap route is defined for the semicircle")
    _, y = outlier_from_stieltjes(law, coupling)
    if y is None:
        return 0.0
    g = stieltjes(law, y)
    return g * g / (-_stieltjes_derivative(law, y))


def hard_edge_gap_a0(beta: float, c, x):
    """Probability of no scaled eigenvalue in (0, x) at the hard edge, a = 0.

    ``exp(-(beta x / 2)(1/c + 1))``.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    c = np.asarray(c, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(c <= 0) or np.any(x < 0):
        raise ValueError("need c > 0 and x >= 0")
    return np.exp(-(beta * x / 2.0) * (1.0 / c + 1.0))


def hard_edge_gap_a0_derivatives(beta: float, c, x) -> dict:
    """Analytic ``F, F_x, F_c, F_cc`` of :func:`hard_edge_gap_a0`."""
    c = np.asarray(c, dtype=float)
    x = np.asarray(x, dtype=float)
    F = hard_edge_gap_a0(beta, c, x)
    k = beta * x / (2.0 * c * c)
    return {
        "F": F,
        "Fx": -(beta / 2.0) * (1.0 / c + 1.0) * F,
        "Fc": k * F,
        "Fcc": (k * k - beta * x / c ** 3) * F,
    }


def jointpdf_beta2(lambdas, alpha: float, N: int | None = None, log: bool = False) -> float:
    """Unnormalized joint eigenvalue density of the spiked GUE ``G/sqrt(4N) + alpha e1 e1^T``.

    ``prod_j exp(-2 N lambda_j^2) * Delta(lambda) * det[lambda_j^{k-1} | exp(4 alpha N lambda_j)]``
    with ``k = 1..N-1`` in the first block.  The product of the two alternating
    factors is symmetric and non-negative; it is evaluated in log space with
    the exponential column rescaled.
    """
    lam = np.asarray(lambdas, dtype=float).ravel()
    n = lam.size if N is None else int(N)
    if n != lam.size:
        raise ValueError("N must equal the number of eigenvalues")
    diffs = lam[:, None] - lam[None, :]
    iu = np.triu_indices(n, 1)
    gaps = np.abs(diffs[iu])
    if np.any(gaps <= 1e-14 * max(1.0, np.abs(lam).max())):
        raise ValueError("coincident eigenvalues")
    c = 4.0 * alpha * n
    shift = c * lam.max() if c >= 0 else c * lam.min()
    M = np.empty((n, n))
    M[:, : n - 1] = lam[:, None] ** np.arange(n - 1)[None, :]
    M[:, n - 1] = np.exp(c * lam - shift)
    _, logdet = np.linalg.slogdet(M)
    logval = -2.0 * n * np.sum(lam ** 2) + np.sum(np.log(gaps)) + logdet + shift
    return float(logval) if log else float(np.exp(logval))


class HCIZCheck(NamedTuple):
    det_form: float
    residue_form: float
    residue_sum: float


def hciz_rank1_check(a, b: float) -> HCIZCheck:
    """Two evaluations of the rank-one HCIZ integral.

    ``det_form = det[a_j^{k-1} | exp(a_j b)] / (Delta(a) b^{N-1})`` with
    ``Delta(a) = prod_{j<k} (a_k - a_j)``; ``residue_sum = sum_j exp(b a_j) /
    prod_{k != j} (a_j - a_k)``; ``residue_form = b^{1-N} residue_sum``, which is
    the residue evaluation of the contour integral up to ``2 pi``.
    The ratio ``det_form / residue_form`` is a constant (``+-1``).
    """
    a = np.asarray(a, dtype=float).ravel()
    n = a.size
    d = np.abs(a[:, None] - a[None, :]) + np.eye(n)
    if n > 1 and d.min() < 1e-8:
        raise ValueError("a values closer than 1e-8")
    M = np.empty((n, n))
    M[:, : n - 1] = a[:, None] ** np.arange(n - 1)[None, :]
    M[:, n - 1] = np.exp(a * b)
    vdm = np.prod([a[k] - a[j] for j in range(n) for k in range(j + 1, n)]) if n > 1 else 1.0
    det_form = np.linalg.det(M) / (vdm * b ** (n - 1))
    res = 0.0
    for j in range(n):
        res += math.exp(b * a[j]) / np.prod(np.delete(a[j] - a, j))
    return HCIZCheck(float(det_form), float(res * b ** (1 - n)), float(res))
