"""
Spectra of small metric graphs, two ways
========================================

The finite element solver refines a piecewise-linear mesh until the lowest
eigenvalues settle.  For q = 0 the secular determinant gives the same numbers
without any mesh, so the two can be compared directly.
"""

import math

import numpy as np

from qgspec.graph import build_graph, flower, interval, star
from qgspec.secular import secular_spectrum_q0
from qgspec.solver import exact_dirichlet_spectrum, solve_spectrum

PI2 = math.pi ** 2

# The unit interval with Dirichlet ends: pi^2 k^2.
G = interval(1.0, "inf")
res = solve_spectrum(G, k=4)
print("interval, Dirichlet ends")
print("  FE      ", np.round(res.eigenvalues / PI2, 8), "x pi^2")
print("  exact   ", exact_dirichlet_spectrum(G, 4) / PI2)
print("  levels  ", res.levels, " final h =", res.mesh_size)

# Equilateral 3-star with Kirchhoff conditions. Two modes vanish at the centre
# and share lambda = pi^2/4, so a degenerate pair shows up as a cluster.
G = star([1.0, 1.0, 1.0])
res = solve_spectrum(G, k=6, tol=1e-7)
print("\n3-star, Kirchhoff")
print("  FE      ", np.round(res.eigenvalues / PI2, 6) + 0.0)
print("  secular ", np.round(secular_spectrum_q0(G, 6) / PI2, 6))
print("  clusters", res.clusters())

# Loops are fine too: the figure-eight has a triple eigenvalue at 4 pi^2.
G = flower([1.0, 1.0])
print("\nfigure-eight")
print("  secular ", np.round(secular_spectrum_q0(G, 6) / PI2, 6))

# Attractive couplings pull an eigenvalue below zero.
G = interval(1.0, -1.0)
print("\ninterval with alpha = -1 at both ends")
print("  FE      ", solve_spectrum(G, k=2, tol=1e-8).eigenvalues)
print("  secular ", secular_spectrum_q0(G, 2))

# A mixed graph: a triangle with a pendant edge, one Dirichlet vertex.
G = build_graph(4, [(0, 1, 1.0), (1, 2, 0.7), (2, 0, 1.3), (2, 3, 0.5)],
                [2.0, 0.0, 5.0, "inf"])
fe = solve_spectrum(G, k=5, tol=1e-7)
sec = secular_spectrum_q0(G, 5)
print("\ntriangle with a Dirichlet pendant")
for j, (a, b, err) in enumerate(zip(fe.eigenvalues, sec, fe.error_estimates), start=1):
    print(f"  lambda_{j}: FE {a:.9f}  secular {b:.9f}  diff {a - b:.1e}  est {err:.1e}")
