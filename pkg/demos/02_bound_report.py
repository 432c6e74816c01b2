"""
Every closed-form bound for one graph
=====================================

A lasso (a loop with a tail) with a polynomial potential and positive
couplings.  ``evaluate_all`` evaluates each bound for each exponent p and
every k up to k_max, and marks the ones whose hypotheses fail.
"""

import math

from qgspec.bounds import check_soundness, evaluate_all
from qgspec.graph import build_graph, graph_invariants
from qgspec.potential import Potential, lp_norm_positive_part
from qgspec.solver import solve_spectrum

G = build_graph(2, [(0, 1, 1.2), (1, 1, 0.8)], [0.0, 3.0])
q = Potential.poly(G, [[0.0, 1.0], [2.0, 0.0, -1.0]])   # x on the tail, 2 - x^2 on the loop

inv = graph_invariants(G)
print(f"L = {inv.total_length}, beta = {inv.betti}, pendants = {inv.pendants}, "
      f"alpha = {G.alpha_total}")
for p in (1, 2, math.inf):
    print(f"||q_+||_{p} = {lp_norm_positive_part(q, p):.6f}")

res = solve_spectrum(G, q, k=4)
rep = evaluate_all(G, q, p=(1, 2, math.inf), k_max=4)

print(f"\n{'bound':30s} {'k':>2s} {'p':>4s} {'value':>12s} {'lambda_k':>12s}  ratio")
for e in rep:
    if not e.applicable:
        continue
    lam = res.eigenvalues[e.k - 1]
    p = "" if e.p is None else f"{e.p:g}"
    print(f"{e.bound_id:30s} {e.k:2d} {p:>4s} {e.value:12.5f} {lam:12.5f}  {lam / e.value:.3f}")

print("\nnot applicable:")
for e in rep:
    if not e.applicable:
        print(f"  {e.bound_id} k={e.k}: {e.reason}")

print("\nviolations:", check_soundness(rep, res.eigenvalues))
