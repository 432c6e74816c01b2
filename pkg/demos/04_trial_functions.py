"""
The trial functions behind the explicit bounds
==============================================

The explicit bounds come from the trial function a f_D + f_N, where f_D is a
sine on the longest edge and f_N a Kirchhoff eigenfunction.  Here we build
them on a mesh, look at the numbers that enter the bound, and run the full
check lambda_k <= max Rayleigh quotient over the trial span <= bound.
"""

from qgspec import bounds as B
from qgspec.graph import build_graph, graph_invariants
from qgspec.potential import Potential
from qgspec.solver import initial_mesh, rayleigh_quotient
from qgspec.trial import (combined_trial, dirichlet_sine_longest, explicit_trial_family,
                          neumann_mode, verify_variational_chain)

G = build_graph(4, [(0, 1, 1.0), (1, 2, 0.6), (1, 3, 1.4)], [0.5, 0.0, 1.0, 0.5])
a = G.alpha_total
mesh = initial_mesh(G).refined().refined()
inv = graph_invariants(G)

fD = dirichlet_sine_longest(G, mesh)
fN = neumann_mode(G, 1, mesh, fD)
f = combined_trial(a, fD, fN)
print(f"a = {a}, longest edge = {G.longest_edge()}, <fD, fN> = {fD.inner(fN):.4f}")
print(f"||f||^2 = {f.l2_norm() ** 2:.4f}  (at least a^2 + 1 = {a * a + 1})")
print(f"R(f)    = {rayleigh_quotient(G, Potential.zero(G), f):.4f}")
c = B.topology_constants(inv)
print(f"explicit bound = {B.bound_principal_explicit(inv, c, 0.0, 2, a):.4f}")

# the family a f_j^D + f_j^N stays linearly independent, also at a = 1
for aa in (0.0, 1.0, 5.0):
    fam = explicit_trial_family(G, 4, aa, mesh)
    print(f"a = {aa}: smallest Gram singular value {fam.smallest_singular_value():.3e}")

q = Potential.constant(G, [0.0, 4.0, 1.0])
rep = verify_variational_chain(G, q, p=2, k=3)
print(f"\n{'kind':10s} {'k':>2s} {'lambda_k':>10s} {'trial max':>10s} {'bound':>10s}")
for s in rep.steps:
    print(f"{s.kind:10s} {s.k:2d} {s.eigenvalue:10.4f} {s.trial_max:10.4f} {s.bound:10.4f}"
          f"  {'ok' if s.ok else 'FAIL'} {s.note}")
print("intermediate checks:", rep.checks)
print("notes:", rep.notes or "none")
print("chain holds:", rep.ok)
