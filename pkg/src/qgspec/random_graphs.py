"""Seeded random metric graphs and potentials for the property suites."""

from __future__ import annotations

import math

import numpy as np

from .graph import MetricGraph, build_graph, graph_invariants
from .mesh import Mesh, MeshFunction
from .potential import Potential


def random_graph(rng: np.random.Generator, max_vertices=5, max_edges=7,
                 length_range=(0.3, 2.0), alpha_range=(0.0, 50.0), p_dirichlet=0.0,
                 connected=True) -> MetricGraph:
    """Random multigraph without isolated vertices; loops and parallel edges allowed.

    With ``connected=True`` a random spanning tree is laid down first. Each
    vertex independently becomes Dirichlet with probability ``p_dirichlet``.
    """
    nv = int(rng.integers(1, max_vertices + 1))
    edges = []
    if connected:
        order = rng.permutation(nv)
        for i in range(1, nv):
            edges.append((int(order[i]), int(order[rng.integers(0, i)])))
    else:
        for v in range(nv):
            edges.append((v, int(rng.integers(0, nv))))
    n_target = int(rng.integers(max(len(edges), 1), max_edges + 1))
    while len(edges) < n_target:
        edges.append((int(rng.integers(0, nv)), int(rng.integers(0, nv))))
    lengths = rng.uniform(*length_range, size=len(edges))
    alphas = [math.inf if rng.random() < p_dirichlet else float(rng.uniform(*alpha_range))
              for _ in range(nv)]
    return build_graph(nv, [(a, b, l) for (a, b), l in zip(edges, lengths)], alphas)


def random_admissible_graph(rng: np.random.Generator, **kw) -> MetricGraph:
    """Connected, not a cycle (the hypotheses of the topology-dependent bounds)."""
    while True:
        G = random_graph(rng, connected=True, **kw)
        inv = graph_invariants(G)
        if inv.connected and not inv.is_cycle:
            return G


def random_constant_potential(rng, G: MetricGraph, lo=-10.0, hi=10.0) -> Potential:
    return Potential.constant(G, rng.uniform(lo, hi, size=G.n_edges))


def random_nonneg_potential(rng, G: MetricGraph) -> Potential:
    """Constant or quadratic (non-negative coefficients) per edge, so ``q >= 0``."""
    if rng.random() < 0.5:
        return Potential.constant(G, rng.uniform(0.0, 10.0, size=G.n_edges))
    return Potential.poly(G, [rng.uniform(0.0, 5.0, size=3) for _ in range(G.n_edges)])


def random_mesh_function(rng, G: MetricGraph, max_intervals=8) -> MeshFunction:
    mesh = Mesh(G, tuple(int(n) for n in rng.integers(1, max_intervals + 1, size=G.n_edges)))
    u = rng.normal(size=mesh.n_dofs)
    return MeshFunction.from_dofs(mesh, u)
