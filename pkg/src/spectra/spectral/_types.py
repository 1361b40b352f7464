from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


class ConvergenceError(RuntimeError):
    """An iterative solver did not converge within its iteration budget."""


@dataclass
class RealSpectrum:
    """Real eigenvalues sorted in descending order.

    ``ties`` is set when two consecutive values are exactly equal; the order
    among equal values is then the input order.
    """

    values: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)
    vectors: np.ndarray | None = None

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        order = np.argsort(-v, kind="stable")
        self.values = v[order]
        if self.vectors is not None:
            self.vectors = np.asarray(self.vectors)[:, order]
        self.meta = dict(self.meta)
        self.meta["ties"] = bool(np.any(np.diff(self.values) == 0.0))

    def __len__(self) -> int:
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    @property
    def max(self) -> float:
        return float(self.values[0])


@dataclass
class ComplexSpectrum:
    """Complex eigenvalues (unordered unless a solver documents otherwise)."""

    values: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)
    right: np.ndarray | None = None
    left: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=complex)
        self.meta = dict(self.meta)

    def __len__(self) -> int:
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


@dataclass
class SecularProblem:
    """Rank-one secular equation data.

    The real problem is ``1 - b * (u0/x + sum_j w_j/(x - mu_j)) = 0`` and the
    complex problem is ``1 - i*alpha * sum_j w_j/(z - mu_j) = 0``.
    ``coupling`` is ``b`` or ``alpha`` (a purely imaginary value ``1j*alpha``
    is also accepted for the complex problem).
    """

    poles: np.ndarray
    weights: np.ndarray
    coupling: complex
    pole_at_zero_weight: float | None = None

    def __post_init__(self) -> None:
        self.poles = np.asarray(self.poles, dtype=float).ravel()
        self.weights = np.asarray(self.weights, dtype=float).ravel()
        if self.poles.shape != self.weights.shape:
            raise ValueError("poles and weights differ in length")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        if len(np.unique(self.poles)) != len(self.poles):
            raise ValueError("poles must be distinct")
        if self.pole_at_zero_weight is not None:
            if self.pole_at_zero_weight < 0:
                raise ValueError("pole_at_zero_weight must be non-negative")
            if np.any(self.poles == 0.0):
                raise ValueError("a pole at zero is given twice")


@dataclass
class OverlapSet:
    """Eigenvalues with their diagonal overlaps and optionally the full matrix."""

    z: np.ndarray
    diagonal: np.ndarray
    off_diagonal: np.ndarray | None = None

    @property
    def records(self) -> np.ndarray:
        return np.rec.fromarrays([self.z, self.diagonal], names="z,O")
