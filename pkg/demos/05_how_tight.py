"""
How tight are the bounds on random graphs?
==========================================

For a batch of random graphs with random couplings in [0, 50] and a constant
potential, print lambda_k / bound for the best bound of each family.  A ratio
close to 1 means the bound is nearly attained.
"""

import math
from collections import defaultdict

import numpy as np

from qgspec.bounds import evaluate_all
from qgspec.random_graphs import random_constant_potential, random_graph
from qgspec.solver import solve_spectrum

rng = np.random.default_rng(2024)
best = defaultdict(list)
for i in range(30):
    G = random_graph(rng)
    q = random_constant_potential(rng, G, 0.0, 5.0)
    lam = solve_spectrum(G, q, 3, tol=1e-5).eigenvalues
    rep = evaluate_all(G, q, (1, 2, math.inf), 3)
    ratios = defaultdict(float)
    for e in rep.applicable():
        ratios[(e.bound_id, e.k)] = max(ratios[(e.bound_id, e.k)], lam[e.k - 1] / e.value)
    for key, r in ratios.items():
        best[key].append(r)

print(f"{'bound':30s} {'k':>2s} {'n':>3s} {'median':>8s} {'max':>8s}")
for (bid, k), r in sorted(best.items()):
    r = np.array(r)
    print(f"{bid:30s} {k:2d} {r.size:3d} {np.median(r):8.3f} {r.max():8.3f}")
