"""How correlated can two qubits get without changing the global spectrum?

Walks a few joint spectra through the closed forms, builds the achieving
states, and cross-checks against brute Haar sampling of the orbit.
"""

import numpy as np

from orbitmi import (
    build_rho_max,
    build_rho_min,
    delta_i_max_energy,
    extremal_correlations,
    mutual_information,
    sample_orbit_qmi,
)

SPECTRA = {
    "pure": [1.0, 0.0, 0.0, 0.0],
    "rank-2 even": [0.5, 0.5, 0.0, 0.0],
    "rank-2 uneven": [0.8, 0.2, 0.0, 0.0],
    "rank-3": [0.6, 0.3, 0.1, 0.0],
    "maximally mixed": [0.25, 0.25, 0.25, 0.25],
}

print(f"{'spectrum':18s} {'i_min':>8s} {'i_max':>8s} {'delta':>8s} "
      f"{'sampled min':>12s} {'sampled max':>12s}")
for name, lam in SPECTRA.items():
    res = extremal_correlations(lam, (2, 2))
    qs = np.array([q for q, _ in sample_orbit_qmi(lam, (2, 2), 5000, rng=0)])
    print(f"{name:18s} {res.i_min:8.4f} {res.i_max:8.4f} {res.delta_i_max:8.4f} "
          f"{qs.min():12.4f} {qs.max():12.4f}")

print()
lam = [0.6, 0.3, 0.1, 0.0]
lo = build_rho_min(lam, (2, 2))
hi = build_rho_max(lam, (2, 2))
print("rank-3 example, minimizing arrangement:", lo.tableau.grid)
print("  classical state mutual information :", f"{lo.qmi():.6f} bits")
print("  entangled-basis mixture            :", f"{mutual_information(hi):.6f} bits")

print()
print("energy-constrained ceiling for the rank-3 spectrum:")
for e in (0.4, 0.6, 1.0, 1.4, 1.6):
    print(f"  E = {e:3.1f}: delta_i_max = {delta_i_max_energy(lam, e):.4f} bits")
