"""Spiked GOE: where the top eigenvalue goes and how much it remembers the spike.

Run with ``python3 demos/outlier_and_overlap.py``.
"""
from __future__ import annotations

import numpy as np

from spectra import RngState, theory
from spectra.ensembles import sample_gaussian_dense
from spectra.spectral import eig_hermitian_dense

N, reps = 200, 40
law = theory.BulkLaw.semicircle()
root = RngState(2024)

print(f"{'alpha':>6} {'mean top':>10} {'theory':>8} {'overlap':>8} {'theory':>8}")
for i, alpha in enumerate((0.3, 0.8, 1.5, 3.0)):
    top, ov = [], []
    for H in sample_gaussian_dense(root.split(i), 1, N, alpha, size=reps):
        sp = eig_hermitian_dense(H, vectors=True)
        top.append(sp.values[0])
        ov.append(sp.vectors[0, 0] ** 2)
    p = theory.outlier_prediction(law, alpha)
    loc = p.location if p.location is not None else law.support[1]
    print(f"{alpha:6.2f} {np.mean(top):10.4f} {loc:8.4f} {np.mean(ov):8.4f} {p.overlap_selfconsistent:8.4f}")

# below alpha = 1/2 the top eigenvalue sticks to the edge 1 and the overlap is O(1/N);
# above it the eigenvalue detaches to alpha + 1/(4 alpha)
