"""GUE plus an imaginary rank-one coupling: eigenvalues leave the real axis.

Samples near-origin eigenvalues at bulk scaling, compares their imaginary
parts with the limiting profile, and traces eigenvalue trajectories as the
coupling grows.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from spectra import RngState, planar
from spectra.ensembles import sample_antiherm_spectrum

N, alpha0, reps = 100, 2.0, 200
g = planar.PlanarParams(alpha0).profile_g
alpha = math.sqrt(N / 2) * alpha0
root = RngState(7)

Y = []
for r in range(reps):
    z = sample_antiherm_spectrum(root.split(r), N, alpha)
    z = np.delete(z, np.argmax(z.imag))  # the single outlier far above the bulk
    near = z[np.argsort(np.abs(z.real))[:8]]
    Y.extend(near.imag * math.sqrt(2 * N))
Y = np.array(Y)

edges = np.linspace(0, 3, 7)
hist = np.histogram(Y, bins=edges)[0] / (Y.size * np.diff(edges))
mid = 0.5 * (edges[1:] + edges[:-1])
print(f"g = {g}")
for lo, hi, m, h in zip(edges[:-1], edges[1:], mid, hist):
    # bin average of the profile, which is steep near Y = 0
    avg = integrate.quad(lambda y: planar.rho_profile(g, y), lo, hi)[0] / (hi - lo)
    print(f"Y={m:4.2f}  sample {h:6.3f}  profile {avg:6.3f}")

tab = planar.parameter_sweep(RngState(1), "antiherm", np.linspace(0, 6, 61), 12)
print("sum of imaginary parts minus alpha along the sweep:",
      f"{np.abs(tab.values.imag.sum(axis=1) - tab.grid).max():.1e}")
print("imaginary parts at alpha = 6:", np.round(np.sort(tab.values[-1].imag)[::-1], 3))
