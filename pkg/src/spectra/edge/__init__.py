"""Soft- and hard-edge distribution numerics.

============================  ==============================================
``airy``                      Ai and Ai' on the real line
``hastings_mcleod``           Painleve II transcendent as a PainleveTable
``tw_cdf``                    Tracy-Widom E_1, E_2, E_4
``lax_propagate``             Lax-pair functions f, g on an (s, w) grid
``crit_cdf``                  critical-regime F_{2,w}, F_{4,w}
``deformed_airy_kernel``      K_soft plus the rank-one deformation
``fredholm_f2w``              det(I - K) by Nystrom discretization
``pde_residual``              soft and hard edge PDE residuals
============================  ==============================================
"""
from __future__ import annotations

from .airy import airy, airy_tail_integral
from .fredholm import FredholmConfig, airy_kernel, airy_tail_term, deformed_airy_kernel, fredholm_f2w
from .painleve import (LaxField, PainleveTable, crit_cdf, default_field, default_table, hastings_mcleod,
                       lax_propagate, tw_cdf)
from .pde import DistributionCurve, crit_curve, pde_residual, tw_curve

__all__ = [
    "airy", "airy_tail_integral", "FredholmConfig", "airy_kernel", "airy_tail_term", "deformed_airy_kernel",
    "fredholm_f2w", "LaxField", "PainleveTable", "crit_cdf", "default_field", "default_table",
    "hastings_mcleod", "lax_propagate", "tw_cdf", "DistributionCurve", "crit_curve", "pde_residual", "tw_curve",
]
