"""Eigenvalues of Schroedinger operators with delta-coupling vertex conditions.

The finite element solve is a conforming Rayleigh-Ritz method, so every
discrete eigenvalue is an upper bound for the exact one and decreases under
nested refinement.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .graph import MetricGraph
from .mesh import Mesh, MeshError, MeshFunction, assemble_discrete_forms
from .potential import Potential

log = logging.getLogger(__name__)

DEFAULT_MESH_DIVISIONS = 16  # h0 = l_min / 16
DEFAULT_MAX_REFINEMENTS = 10
DENSE_LIMIT = 600


class SolverError(RuntimeError):
    pass


@dataclass
class SpectralResult:
    eigenvalues: np.ndarray
    eigenfunctions: list
    error_estimates: np.ndarray
    mesh_size: float
    mesh: Mesh
    converged: bool = True
    levels: int = 0
    history: list = field(default_factory=list)

    def clusters(self, rtol=1e-6) -> list[list[int]]:
        """Groups of (numerically) degenerate eigenvalue indices."""
        groups: list[list[int]] = []
        for i, lam in enumerate(self.eigenvalues):
            if groups and abs(lam - self.eigenvalues[groups[-1][-1]]) <= rtol * max(1.0, abs(lam)):
                groups[-1].append(i)
            else:
                groups.append([i])
        return [g for g in groups if len(g) > 1]


def spectral_floor(G: MetricGraph, q: Potential) -> float:
    """A number strictly below the bottom of the spectrum.

    Uses ``f(v)^2 <= eps ||f'||^2 + (1/eps + 1/l) ||f||^2`` on an incident edge
    for every attractive vertex, each edge serving at most two vertices.
    """
    neg = sum(-a for a in G.couplings if a < 0)
    if G.n_edges == 0:
        return -1.0
    qmin = min(float(np.min(q.values(e, np.linspace(0, l, 257))))
               for e, l in enumerate(G.lengths))
    if q.kind == "samples":
        qmin = min(qmin, min(float(np.min(d)) for d in q.data))
    lmin = float(np.min(G.lengths))
    return min(qmin, 0.0) - (4.0 * neg ** 2 + 2.0 * neg / lmin) - 1.0


def _rayleigh_ritz(A, B, V):
    """Re-orthonormalise a basis ``V`` through the projected problem."""
    AV = A @ V
    BV = B @ V
    a = V.T @ AV
    b = V.T @ BV
    a = 0.5 * (a + a.T)
    b = 0.5 * (b + b.T)
    w, c = sla.eigh(a, b)
    return w, V @ c


def solve_on_mesh(mesh: Mesh, q: Potential, k: int):
    """Lowest ``k`` eigenpairs of the discrete problem on a fixed mesh.

    Returns ``(eigenvalues, dof_vectors)`` with B-orthonormal columns.
    """
    A, B, _ = assemble_discrete_forms(mesh.graph, q, mesh=mesh)
    n = mesh.n_dofs
    if k > n:
        raise SolverError(f"requested {k} eigenvalues but the mesh has {n} dofs")
    if n <= DENSE_LIMIT:
        w, V = sla.eigh(A.toarray(), B.toarray(), subset_by_index=[0, k - 1])
        return w, V
    sigma = spectral_floor(mesh.graph, q)
    m = min(n - 1, k + 4)
    # fixed start vector: ARPACK's default is random, which breaks reproducibility
    v0 = np.random.default_rng(0).standard_normal(n)
    w, V = spla.eigsh(A.tocsc(), k=m, M=B.tocsc(), sigma=sigma, which="LM", tol=0, v0=v0)
    order = np.argsort(w)
    w, V = _rayleigh_ritz(A, B, V[:, order])
    return w[:k], V[:, :k]


def initial_mesh(G: MetricGraph, h=None, k: int = 1) -> Mesh:
    if G.n_edges == 0:
        raise SolverError("graph has no edges")
    if h is None:
        h = float(np.min(G.lengths)) / DEFAULT_MESH_DIVISIONS
    mesh = Mesh.uniform(G, h)
    while mesh.n_dofs < k + 1:
        mesh = mesh.refined()
    return mesh


def solve_spectrum(G: MetricGraph, q: Potential | None = None, k: int = 5, tol=1e-6,
                   h=None, max_refinements=DEFAULT_MAX_REFINEMENTS) -> SpectralResult:
    """Lowest ``k`` eigenvalues by dyadic mesh refinement.

    Refines until every one of the first ``k`` eigenvalues changes by less than
    ``tol * max(|lam|, pi^2 / L^2)`` between consecutive levels. The error
    estimate is the Richardson one for an O(h^2) method, ``|change| / 3``.
    When the refinement cap is hit the last result is returned with
    ``converged=False``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if q is None:
        q = Potential.zero(G)
    mesh = initial_mesh(G, h, k)
    scale_floor = math.pi ** 2 / G.total_length ** 2
    w_old, V = solve_on_mesh(mesh, q, k)
    history = [w_old]
    errors = np.full(k, np.inf)
    converged = False
    level = 0
    for level in range(1, max_refinements + 1):
        mesh = mesh.refined()
        w, V = solve_on_mesh(mesh, q, k)
        history.append(w)
        change = np.abs(w_old - w)
        errors = change / 3.0
        w_old = w
        if np.all(change <= tol * np.maximum(np.abs(w), scale_floor)):
            converged = True
            break
    if not converged:
        log.warning("solve_spectrum: no convergence to tol=%g after %d refinements",
                    tol, max_refinements)
    funcs = [MeshFunction.from_dofs(mesh, V[:, j]) for j in range(k)]
    return SpectralResult(eigenvalues=np.asarray(w_old), eigenfunctions=funcs,
                          error_estimates=errors, mesh_size=mesh.h, mesh=mesh,
                          converged=converged, levels=level, history=history)


def dirichlet_modes(G: MetricGraph, k: int) -> list[tuple[float, int, int]]:
    """First ``k`` Dirichlet Laplacian modes as ``(eigenvalue, edge, j)``.

    Ties (equal up to rounding) are ordered by edge index, then mode index.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    cand = [(math.pi ** 2 * j ** 2 / e.length ** 2, i, j)
            for i, e in enumerate(G.edges) for j in range(1, k + 1)]
    cand.sort()
    # rounding may split a tie; regroup and reorder by (edge, j)
    out, i = [], 0
    while i < len(cand) and len(out) < k:
        grp = [cand[i]]
        while i + len(grp) < len(cand) and \
                cand[i + len(grp)][0] - grp[0][0] <= 1e-12 * grp[0][0]:
            grp.append(cand[i + len(grp)])
        grp.sort(key=lambda t: (t[1], t[2]))
        out.extend(grp)
        i += len(grp)
    return out[:k]


def exact_dirichlet_spectrum(G: MetricGraph, k: int) -> np.ndarray:
    """Merged edge spectra ``pi^2 j^2 / l_e^2`` with multiplicity (q = 0)."""
    return np.array([m[0] for m in dirichlet_modes(G, k)])


def dirichlet_counting(G: MetricGraph, lam: float) -> int:
    """Number of Dirichlet eigenvalues ``<= lam``: sum of ``floor(l_e sqrt(lam) / pi)``."""
    if lam < 0:
        return 0
    return int(sum(math.floor(l * math.sqrt(lam) / math.pi + 1e-12) for l in G.lengths))


def quadratic_form(G: MetricGraph, q: Potential, f: MeshFunction) -> float:
    vv = f.vertex_values()
    vertex = 0.0
    for v, a in enumerate(G.couplings):
        if np.isnan(vv[v]):
            continue
        if a == math.inf:
            if abs(vv[v]) > 1e-10:
                raise MeshError(f"trial function does not vanish at Dirichlet vertex {v}")
            continue
        vertex += a * vv[v] ** 2
    return f.derivative_l2_norm() ** 2 + f.potential_energy(q) + vertex


def rayleigh_quotient(G: MetricGraph, q: Potential | None, f: MeshFunction) -> float:
    """``(int f'^2 + int q f^2 + sum alpha_v f(v)^2) / int f^2``."""
    if f.mesh.graph.n_edges != G.n_edges or not np.allclose(f.mesh.graph.lengths, G.lengths):
        raise MeshError("mesh function lives on a different graph")
    if q is None:
        q = Potential.zero(G)
    den = f.inner(f)
    if not den > 0:
        raise ZeroDivisionError("Rayleigh quotient of the zero function")
    return quadratic_form(G, q, f) / den
