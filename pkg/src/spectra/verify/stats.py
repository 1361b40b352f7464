"""Goodness-of-fit statistics and histograms."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as _st


def ks_test(samples, cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance ``sup |F_n - F|``.

    Parameters
    ----------
    samples : array_like
        At least 10 finite values.
    cdf : callable
        Vectorized distribution function; it must be nondecreasing at the
        sorted samples.

    Raises
    ------
    ValueError
        Fewer than 10 samples, or ``cdf`` decreasing somewhere on the samples.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size < 10:
        raise ValueError("need at least 10 samples")
    F = np.asarray(cdf(x), dtype=float)
    if np.any(np.diff(F) < 0) or np.any(F < 0) or np.any(F > 1):
        raise ValueError("cdf is not a monotone distribution function on the samples")
    return float(_st.kstest(x, lambda t: np.asarray(cdf(t), dtype=float)).statistic)


def ks_2samp(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov distance."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size < 10 or b.size < 10:
        raise ValueError("need at least 10 samples per group")
    return float(_st.ks_2samp(a, b).statistic)


@dataclass
class Histogram:
    """Bin edges (ascending), counts, and the number of samples counted."""

    bin_edges: np.ndarray
    counts: np.ndarray
    total: int

    def __post_init__(self) -> None:
        self.bin_edges = np.asarray(self.bin_edges, dtype=float)
        self.counts = np.asarray(self.counts)
        if self.bin_edges.ndim != 1 or np.any(np.diff(self.bin_edges) <= 0):
            raise ValueError("bin_edges must be strictly ascending")
        if self.counts.shape != (self.bin_edges.size - 1,):
            raise ValueError("need one count per bin")
        if int(self.counts.sum()) != int(self.total):
            raise ValueError("counts must sum to total")

    @classmethod
    def from_samples(cls, samples, bins, range=None) -> "Histogram":
        """Histogram of the samples falling inside the bin range."""
        c, e = np.histogram(np.asarray(samples, dtype=float).ravel(), bins=bins, range=range)
        return cls(e, c, int(c.sum()))

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    def density(self, n_total: int | None = None) -> np.ndarray:
        """Counts divided by bin width and by ``n_total`` (default ``total``)."""
        n = self.total if n_total is None else n_total
        return self.counts / (np.diff(self.bin_edges) * n)
