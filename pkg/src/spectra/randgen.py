"""Deterministic, splittable random streams and primitive variates.

Every sampler in the package takes an explicit :class:`RngState`.  A state is
the triple ``(seed, stream_id, counter)`` mapped onto numpy's counter-based
Philox bit generator, so two states with the same triple produce the same
numbers and replicas can be handed disjoint streams without any sequencing.

=====================  ================================================
``gaussian``           real N[0,1] or standard complex Gaussian (E|z|^2=1)
``chi``                square roots of Gamma variates (both conventions)
``sphere_vector``      uniform unit vector, real or complex
``uniform``            iid Uniform[0, 1)
=====================  ================================================
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass
class RngState:
    """Seeded counter-based stream.

    Parameters
    ----------
    seed, stream_id, counter : int
        64-bit integers.  ``(seed, stream_id)`` is the Philox key and
        ``counter`` the starting block counter.

    Notes
    -----
    The state owns a ``numpy.random.Generator``; drawing from it advances the
    stream.  Use :meth:`split` to derive independent child streams, or
    :meth:`copy` to replay the same numbers.
    """

    seed: int
    stream_id: int = 0
    counter: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.seed = int(self.seed) & _MASK64
        self.stream_id = int(self.stream_id) & _MASK64
        self.counter = int(self.counter) & _MASK64
        bitgen = np.random.Philox(
            key=np.array([self.seed, self.stream_id], dtype=np.uint64),
            counter=np.array([self.counter, 0, 0, 0], dtype=np.uint64),
        )
        self._gen = np.random.Generator(bitgen)

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def split(self, index: int) -> "RngState":
        """Child stream number ``index``; children of distinct indices are disjoint keys."""
        mixed = (self.stream_id * 0x100000001B3 + int(index) + 1) & _MASK64
        return RngState(self.seed, _splitmix64(mixed), 0)

    def copy(self) -> "RngState":
        """Fresh state at the original ``(seed, stream_id, counter)``."""
        return RngState(self.seed, self.stream_id, self.counter)


def as_state(state: RngState | int | None) -> RngState:
    """Accept an ``RngState`` or a bare integer seed."""
    if isinstance(state, RngState):
        return state
    if state is None:
        return RngState(0)
    return RngState(int(state))


@dataclass(frozen=True)
class UnitVector:
    """Unit-norm vector with a field tag (``"real"`` or ``"complex"``)."""

    entries: np.ndarray
    field_tag: str = "real"

    def __post_init__(self) -> None:
        nrm = np.linalg.norm(self.entries)
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"vector norm {nrm} is not 1")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __len__(self) -> int:
        return len(self.entries)


def gaussian(state: RngState, kind: str = "real", size=None):
    """Standard Gaussian variates.

    ``kind="complex"`` gives independent N[0, 1/2] real and imaginary parts
    so that E|z|^2 = 1.
    """
    g = state.generator
    if kind == "real":
        return g.standard_normal(size)
    if kind == "complex":
        re = g.standard_normal(size)
        im = g.standard_normal(size)
        return (re + 1j * im) * np.sqrt(0.5)
    raise ValueError(f"unknown kind {kind!r}")


def chi(state: RngState, k, size=None, *, tilde: bool = True):
    """Square root of a Gamma variate.

    Parameters
    ----------
    k : float or array
        Degrees of freedom, any positive real.
    tilde : bool
        ``True`` returns ``sqrt(Gamma[k/2, 1])``; ``False`` returns the
        classical chi variate ``sqrt(Gamma[k/2, 2])`` whose square has mean k.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("chi requires k > 0")
    scale = 1.0 if tilde else 2.0
    return np.sqrt(state.generator.gamma(k / 2.0, scale, size))


def uniform(state: RngState, size=None):
    return state.generator.random(size)


def sphere_vector(state: RngState, n: int, kind: str = "real") -> UnitVector:
    """Uniform point on the unit sphere in R^n or C^n."""
    if n < 1:
        raise ValueError("sphere_vector requires n >= 1")
    v = gaussian(state, kind, n)
    v = v / np.linalg.norm(v)
    return UnitVector(v, kind)
