"""Piecewise-linear finite elements on metric graphs.

Every edge is cut into ``n_e`` equal intervals. Endpoint nodes of edges are
shared through their vertex, interior nodes belong to one edge only, so the
discrete space consists of functions that are continuous on the graph.
Dirichlet vertices carry no degree of freedom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .graph import MetricGraph
from .potential import Potential


class MeshError(ValueError):
    pass


@dataclass(frozen=True)
class Mesh:
    graph: MetricGraph
    intervals: tuple[int, ...]
    dof_maps: tuple = field(init=False, repr=False, compare=False)
    n_dofs: int = field(init=False, compare=False)
    vertex_dofs: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        G = self.graph
        if len(self.intervals) != G.n_edges:
            raise MeshError("need one interval count per edge")
        if any(n < 1 for n in self.intervals):
            raise MeshError("zero-length mesh on some edge")
        vdof = []
        nxt = 0
        deg = G.degrees()
        for v in range(G.n_vertices):
            # isolated vertices carry no measure and no dof
            if G.is_dirichlet(v) or deg[v] == 0:
                vdof.append(-1)
            else:
                vdof.append(nxt)
                nxt += 1
        maps = []
        for e, n in zip(G.edges, self.intervals):
            m = np.empty(n + 1, dtype=np.int64)
            m[0] = vdof[e.tail]
            m[-1] = vdof[e.head]
            m[1:-1] = np.arange(nxt, nxt + n - 1)
            nxt += n - 1
            maps.append(m)
        object.__setattr__(self, "dof_maps", tuple(maps))
        object.__setattr__(self, "n_dofs", nxt)
        object.__setattr__(self, "vertex_dofs", tuple(vdof))

    @classmethod
    def uniform(cls, G: MetricGraph, h: float) -> "Mesh":
        """``n_e = max(2, ceil(l_e / h))`` intervals per edge."""
        if not h > 0:
            raise MeshError("mesh size must be positive")
        return cls(G, tuple(max(2, math.ceil(l / h - 1e-12)) for l in G.lengths))

    def refined(self, factor: int = 2) -> "Mesh":
        """Nested refinement: every interval split into ``factor`` pieces."""
        return Mesh(self.graph, tuple(n * factor for n in self.intervals))

    def nodes(self, e: int) -> np.ndarray:
        return np.linspace(0.0, self.graph.edges[e].length, self.intervals[e] + 1)

    def spacing(self, e: int) -> float:
        return self.graph.edges[e].length / self.intervals[e]

    @property
    def h(self) -> float:
        return max(self.spacing(e) for e in range(self.graph.n_edges))


class MeshFunction:
    """Continuous piecewise-linear function on a :class:`Mesh`.

    ``values[e]`` holds the nodal values on edge ``e`` (``n_e + 1`` of them).
    """

    def __init__(self, mesh: Mesh, values: Sequence[np.ndarray], check=True, atol=1e-10):
        self.mesh = mesh
        self.values = [np.asarray(v, dtype=float) for v in values]
        if len(self.values) != mesh.graph.n_edges:
            raise MeshError("one value array per edge expected")
        for e, v in enumerate(self.values):
            if v.shape != (mesh.intervals[e] + 1,):
                raise MeshError(f"edge {e}: expected {mesh.intervals[e] + 1} samples")
        if check:
            self.check_continuity(atol)

    # -- construction -------------------------------------------------------
    @classmethod
    def from_dofs(cls, mesh: Mesh, u: np.ndarray) -> "MeshFunction":
        u = np.asarray(u, dtype=float)
        padded = np.append(u, 0.0)  # index -1 (Dirichlet) reads the trailing zero
        return cls(mesh, [padded[m] for m in mesh.dof_maps], check=False)

    @classmethod
    def from_callable(cls, mesh: Mesh, fn: Callable[[int, np.ndarray], np.ndarray],
                      check=True) -> "MeshFunction":
        """Sample ``fn(edge, x)`` at the mesh nodes."""
        return cls(mesh, [np.asarray(fn(e, mesh.nodes(e)), dtype=float)
                          * np.ones(mesh.intervals[e] + 1)
                          for e in range(mesh.graph.n_edges)], check=check)

    @classmethod
    def constant(cls, mesh: Mesh, c: float) -> "MeshFunction":
        return cls.from_callable(mesh, lambda e, x: np.full_like(x, c))

    def to_dofs(self) -> np.ndarray:
        u = np.zeros(self.mesh.n_dofs)
        for m, v in zip(self.mesh.dof_maps, self.values):
            ok = m >= 0
            u[m[ok]] = v[ok]
        return u

    def check_continuity(self, atol=1e-10):
        G = self.mesh.graph
        seen: dict[int, float] = {}
        for e, edge in enumerate(G.edges):
            for v, val in ((edge.tail, self.values[e][0]), (edge.head, self.values[e][-1])):
                if G.is_dirichlet(v) and abs(val) > atol:
                    raise MeshError(f"nonzero value {val} at Dirichlet vertex {v}")
                if v in seen and abs(seen[v] - val) > atol * max(1.0, abs(val)):
                    raise MeshError(f"discontinuous at vertex {v}: {seen[v]} vs {val}")
                seen.setdefault(v, val)

    # -- arithmetic ---------------------------------------------------------
    def _binary(self, other, op):
        if isinstance(other, MeshFunction):
            if other.mesh.intervals != self.mesh.intervals:
                other = other.resample(self.mesh)
            return MeshFunction(self.mesh, [op(a, b) for a, b in zip(self.values, other.values)],
                                check=False)
        return MeshFunction(self.mesh, [op(a, other) for a in self.values], check=False)

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, c):
        return MeshFunction(self.mesh, [c * a for a in self.values], check=False)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def resample(self, mesh: Mesh) -> "MeshFunction":
        """Linear interpolation onto another mesh of the same graph."""
        if mesh.graph.n_edges != self.mesh.graph.n_edges:
            raise MeshError("cannot resample across different graphs")
        vals = [np.interp(mesh.nodes(e), self.mesh.nodes(e), self.values[e])
                for e in range(mesh.graph.n_edges)]
        return MeshFunction(mesh, vals, check=False)

    # -- norms and integrals (exact for piecewise-linear functions) ---------
    def vertex_values(self) -> np.ndarray:
        G = self.mesh.graph
        out = np.full(G.n_vertices, np.nan)
        for e, edge in enumerate(G.edges):
            out[edge.tail] = self.values[e][0]
            out[edge.head] = self.values[e][-1]
        return out

    def inner(self, other: "MeshFunction") -> float:
        if other.mesh.intervals != self.mesh.intervals:
            other = other.resample(self.mesh)
        total = 0.0
        for e in range(self.mesh.graph.n_edges):
            h = self.mesh.spacing(e)
            a, b = self.values[e], other.values[e]
            total += h / 6.0 * np.sum(2 * a[:-1] * b[:-1] + a[:-1] * b[1:]
                                      + a[1:] * b[:-1] + 2 * a[1:] * b[1:])
        return float(total)

    def l2_norm(self) -> float:
        return math.sqrt(max(self.inner(self), 0.0))

    def derivative_l2_norm(self) -> float:
        total = 0.0
        for e in range(self.mesh.graph.n_edges):
            total += np.sum(np.diff(self.values[e]) ** 2) / self.mesh.spacing(e)
        return math.sqrt(total)

    def sup_norm(self) -> float:
        return float(max(np.max(np.abs(v)) for v in self.values))

    def vertex_sup_norm(self) -> float:
        vv = self.vertex_values()
        vv = vv[~np.isnan(vv)]
        return float(np.max(np.abs(vv))) if vv.size else 0.0

    def integral(self) -> float:
        return float(sum(self.mesh.spacing(e) * (np.sum(v) - 0.5 * (v[0] + v[-1]))
                         for e, v in enumerate(self.values)))

    def mean(self) -> float:
        return self.integral() / self.mesh.graph.total_length

    def potential_energy(self, q: Potential) -> float:
        """``integral of q f^2`` by elementwise Gauss quadrature."""
        total = 0.0
        xg, wg = _gauss_rule(q)
        for e in range(self.mesh.graph.n_edges):
            x = self.mesh.nodes(e)
            h = self.mesh.spacing(e)
            v = self.values[e]
            if q.kind == "constant":
                total += q.data[e] * h / 3.0 * np.sum(v[:-1] ** 2 + v[:-1] * v[1:] + v[1:] ** 2)
                continue
            pts = x[:-1, None] + h * xg[None, :]
            fv = v[:-1, None] * (1 - xg[None, :]) + v[1:, None] * xg[None, :]
            total += h * np.sum(wg[None, :] * q.values(e, pts) * fv ** 2)
        return float(total)


def _gauss_rule(q: Potential):
    """Gauss-Legendre rule on [0, 1], exact for ``q * phi_a * phi_b`` when q is polynomial."""
    if q.kind == "poly":
        deg = max(len(d) for d in q.data) - 1
        n = max(2, (deg + 2) // 2 + 1)
    else:
        n = 4
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def assemble_discrete_forms(G: MetricGraph, q: Potential, h=None, mesh: Mesh | None = None):
    """Assemble the form matrix and the consistent mass matrix.

    The form matrix represents ``int (f')^2 + int q f^2 + sum_v alpha_v f(v)^2``
    on the piecewise-linear space; Dirichlet vertices are eliminated. Returns
    ``(A, B, mesh)``, with the dof layout stored on ``mesh``.
    """
    if mesh is None:
        if h is None:
            raise MeshError("either h or mesh is required")
        mesh = Mesh.uniform(G, h)
    if not q.matches(G):
        raise MeshError("potential does not match the graph's edges")
    for d in q.data:
        if np.any(np.isnan(np.asarray(d, dtype=float))):
            raise MeshError("NaN in potential")
    rows, cols, a_vals, b_vals = [], [], [], []
    xg, wg = _gauss_rule(q)
    phi = np.stack([1 - xg, xg])  # (2, ng)
    for e in range(G.n_edges):
        n = mesh.intervals[e]
        hh = mesh.spacing(e)
        dofs = mesh.dof_maps[e]
        k_loc = np.array([[1.0, -1.0], [-1.0, 1.0]]) / hh
        m_loc = np.array([[2.0, 1.0], [1.0, 2.0]]) * hh / 6.0
        if q.kind == "constant":
            pot = np.broadcast_to(q.data[e] * m_loc, (n, 2, 2))
        else:
            x0 = mesh.nodes(e)[:-1]
            qv = q.values(e, x0[:, None] + hh * xg[None, :])  # (n, ng)
            pot = hh * np.einsum("g,ig,ag,bg->iab", wg, qv, phi, phi)
        a_el = k_loc[None] + pot
        b_el = np.broadcast_to(m_loc, (n, 2, 2))
        conn = np.stack([dofs[:-1], dofs[1:]], axis=1)  # (n, 2)
        for a in range(2):
            for b in range(2):
                ok = (conn[:, a] >= 0) & (conn[:, b] >= 0)
                rows.append(conn[ok, a])
                cols.append(conn[ok, b])
                a_vals.append(a_el[ok, a, b])
                b_vals.append(b_el[ok, a, b])
    for v, d in enumerate(mesh.vertex_dofs):
        if d >= 0 and G.couplings[v] != 0.0:
            rows.append(np.array([d]))
            cols.append(np.array([d]))
            a_vals.append(np.array([G.couplings[v]]))
            b_vals.append(np.array([0.0]))
    nd = mesh.n_dofs
    r = np.concatenate(rows) if rows else np.array([], dtype=np.int64)
    c = np.concatenate(cols) if cols else np.array([], dtype=np.int64)
    A = sp.csr_matrix((np.concatenate(a_vals) if a_vals else [], (r, c)), shape=(nd, nd))
    B = sp.csr_matrix((np.concatenate(b_vals) if b_vals else [], (r, c)), shape=(nd, nd))
    return A, B, mesh
