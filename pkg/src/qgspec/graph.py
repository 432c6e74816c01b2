"""Metric multigraphs with per-vertex delta-coupling strengths.

A coupling of ``math.inf`` at a vertex stands for a Dirichlet condition.
Loops and parallel edges are allowed; a loop adds 2 to the degree of its
vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graph descriptions."""


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    length: float

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class MetricGraph:
    """Finite metric multigraph.

    Vertices are ``0..n_vertices-1``; edge ``e`` is the interval
    ``[0, edges[e].length]`` with ``x = 0`` at ``tail`` and ``x = length``
    at ``head``.
    """

    n_vertices: int
    edges: tuple[Edge, ...]
    couplings: tuple[float, ...]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise GraphError("graph needs at least one vertex")
        if len(self.couplings) != self.n_vertices:
            raise GraphError(
                f"expected {self.n_vertices} couplings, got {len(self.couplings)}")
        for v, a in enumerate(self.couplings):
            if isinstance(a, float) and math.isnan(a):
                raise GraphError(f"vertex {v}: NaN coupling")
            if a == -math.inf:
                raise GraphError(f"vertex {v}: coupling -inf is not allowed")
        for i, e in enumerate(self.edges):
            if not (math.isfinite(e.length) and e.length > 0):
                raise GraphError(f"edge {i}: non-positive length {e.length!r}")
            for end in (e.tail, e.head):
                if not 0 <= end < self.n_vertices:
                    raise GraphError(f"edge {i}: dangling endpoint index {end}")

    # -- convenience -------------------------------------------------------
    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([e.length for e in self.edges], dtype=float)

    @property
    def total_length(self) -> float:
        return float(sum(e.length for e in self.edges))

    def degree(self, v: int) -> int:
        return sum((e.tail == v) + (e.head == v) for e in self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=int)
        for e in self.edges:
            deg[e.tail] += 1
            deg[e.head] += 1
        return deg

    def is_dirichlet(self, v: int) -> bool:
        return self.couplings[v] == math.inf

    @property
    def dirichlet_vertices(self) -> list[int]:
        return [v for v in range(self.n_vertices) if self.is_dirichlet(v)]

    @property
    def alpha_total(self) -> float:
        """Sum of the non-negative coupling strengths (``inf`` if any Dirichlet)."""
        return float(sum(max(a, 0.0) for a in self.couplings))

    @property
    def all_couplings_finite_nonnegative(self) -> bool:
        return all(0.0 <= a < math.inf for a in self.couplings)

    def longest_edge(self) -> int:
        """Index of the longest edge; ties go to the lowest index."""
        lengths = [e.length for e in self.edges]
        return lengths.index(max(lengths))

    def shortest_edge(self) -> int:
        lengths = [e.length for e in self.edges]
        return lengths.index(min(lengths))

    def with_couplings(self, couplings: Sequence[float]) -> "MetricGraph":
        return MetricGraph(self.n_vertices, self.edges, tuple(float(a) for a in couplings))

    def scaled_couplings(self, factor: float) -> "MetricGraph":
        """All couplings multiplied by ``factor`` (Dirichlet vertices stay Dirichlet)."""
        return self.with_couplings([a if a == math.inf else a * factor for a in self.couplings])

    def without_edge(self, index: int) -> "MetricGraph":
        edges = self.edges[:index] + self.edges[index + 1:]
        return MetricGraph(self.n_vertices, edges, self.couplings)


def build_graph(n_vertices: int, edges: Iterable[Sequence], couplings=0.0) -> MetricGraph:
    """Validate and build a :class:`MetricGraph`.

    ``edges`` holds ``(tail, head, length)`` triples. ``couplings`` is either
    one number applied to every vertex or a per-vertex sequence; the string
    ``"inf"`` (or ``math.inf``) marks a Dirichlet vertex.
    """
    edge_list = []
    for i, item in enumerate(edges):
        try:
            tail, head, length = item
        except (TypeError, ValueError):
            raise GraphError(f"edge {i}: expected (tail, head, length)") from None
        if int(tail) != tail or int(head) != head:
            raise GraphError(f"edge {i}: endpoint indices must be integers")
        edge_list.append(Edge(int(tail), int(head), float(length)))
    if isinstance(couplings, (int, float, str)):
        couplings = [couplings] * n_vertices
    return MetricGraph(int(n_vertices), tuple(edge_list),
                       tuple(_coupling_value(a) for a in couplings))


def _coupling_value(a) -> float:
    if isinstance(a, str):
        if a.strip().lower() in ("inf", "+inf", "infinity", "dirichlet"):
            return math.inf
        raise GraphError(f"unrecognised coupling {a!r}")
    return float(a)


# -- a few standard shapes, mostly for tests and demos ---------------------

def interval(length=1.0, alpha=0.0) -> MetricGraph:
    return build_graph(2, [(0, 1, length)], alpha)


def path(lengths: Sequence[float], alpha=0.0) -> MetricGraph:
    return build_graph(len(lengths) + 1,
                       [(i, i + 1, l) for i, l in enumerate(lengths)], alpha)


def star(lengths: Sequence[float], alpha=0.0) -> MetricGraph:
    """Star with centre vertex 0 and pendant vertices ``1..n``."""
    return build_graph(len(lengths) + 1,
                       [(0, i + 1, l) for i, l in enumerate(lengths)], alpha)


def cycle(lengths: Sequence[float], alpha=0.0) -> MetricGraph:
    n = len(lengths)
    return build_graph(n, [(i, (i + 1) % n, l) for i, l in enumerate(lengths)], alpha)


def flower(lengths: Sequence[float], alpha=0.0) -> MetricGraph:
    """One vertex carrying a loop per length (figure-eight for two loops)."""
    return build_graph(1, [(0, 0, l) for l in lengths], alpha)


# -- invariants -------------------------------------------------------------

@dataclass(frozen=True)
class GraphInvariants:
    total_length: float
    betti: int
    pendants: int
    ell_max: float
    ell_min: float
    edge_count: int
    vertex_count: int
    connected: bool
    is_cycle: bool
    components: int


def connected_components(G: MetricGraph) -> list[list[int]]:
    parent = list(range(G.n_vertices))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in G.edges:
        a, b = find(e.tail), find(e.head)
        if a != b:
            parent[a] = b
    comps: dict[int, list[int]] = {}
    for v in range(G.n_vertices):
        comps.setdefault(find(v), []).append(v)
    return sorted(comps.values())


def graph_invariants(G: MetricGraph) -> GraphInvariants:
    deg = G.degrees()
    n_comp = len(connected_components(G))
    connected = n_comp == 1
    lengths = G.lengths
    return GraphInvariants(
        total_length=G.total_length,
        betti=G.n_edges - G.n_vertices + n_comp,
        pendants=int(np.sum(deg == 1)),
        ell_max=float(lengths[G.longest_edge()]) if G.n_edges else 0.0,
        ell_min=float(lengths[G.shortest_edge()]) if G.n_edges else 0.0,
        edge_count=G.n_edges,
        vertex_count=G.n_vertices,
        connected=connected,
        is_cycle=bool(connected and G.n_edges > 0 and np.all(deg == 2)),
        components=n_comp,
    )
