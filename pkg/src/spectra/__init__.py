"""Rank-one perturbed random matrices: samplers, eigensolvers, limit laws.

=================  ==========================================================
``randgen``        splittable deterministic random streams
``ensembles``      dense, tridiagonal, bidiagonal and secular samplers
``spectral``       eigensolvers, polynomial roots, secular equations
``theory``         bulk laws, Stieltjes transforms, outliers, overlaps
``edge``           Airy, Painleve II, Tracy-Widom, critical-regime laws
``planar``         complex spectra of non-Hermitian rank-one perturbations
``verify``         verification suites, statistics and CSV/JSON output
=================  ==========================================================
"""
from __future__ import annotations

from . import edge, ensembles, planar, randgen, spectral, theory
from .randgen import RngState

__version__ = "0.1.0"

__all__ = ["RngState", "edge", "ensembles", "planar", "randgen", "spectral", "theory", "__version__"]
