"""Exact eigenvalues of the Laplacian (q = 0) from the secular determinant.

On each edge a solution of ``-f'' = lam f`` is ``A c(lam, x) + B s(lam, x)``
with ``c(0) = 1, c'(0) = 0, s(0) = 0, s'(0) = 1``. Continuity and the
delta-coupling conditions at all vertices give a square linear system in the
``2|E|`` coefficients; ``lam`` is an eigenvalue iff the system is singular,
with multiplicity equal to its nullity. This module is deliberately
independent of the finite element code.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.optimize import bisect

from .graph import MetricGraph

log = logging.getLogger(__name__)

ROOT_XTOL = 1e-11
NULLITY_RTOL = 1e-6
SUBDIVISIONS = 64


class SecularError(RuntimeError):
    pass


def edge_basis(lam, length):
    """``(c, s)`` at ``x = length`` for an array of ``lam`` (any sign)."""
    lam = np.asarray(lam, dtype=float)
    c = np.empty_like(lam)
    s = np.empty_like(lam)
    pos = lam > 0
    neg = lam < 0
    zero = ~(pos | neg)
    k = np.sqrt(lam[pos])
    c[pos] = np.cos(k * length)
    s[pos] = length * np.sinc(k * length / np.pi)
    kap = np.sqrt(-lam[neg])
    c[neg] = np.cosh(kap * length)
    s[neg] = np.sinh(kap * length) / kap
    c[zero] = 1.0
    s[zero] = length
    return c, s


def secular_matrices(G: MetricGraph, lam) -> np.ndarray:
    """Matching matrices, shape ``(len(lam), 2|E|, 2|E|)``."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    nE = G.n_edges
    N = lam.size
    # value / outgoing derivative of each edge end as rows over (A_e, B_e)
    val = np.zeros((N, 2 * nE, 2 * nE))
    der = np.zeros((N, 2 * nE, 2 * nE))
    for e, edge in enumerate(G.edges):
        c, s = edge_basis(lam, edge.length)
        t, h = 2 * e, 2 * e + 1  # end slots: tail (x = 0), head (x = l)
        val[:, t, 2 * e] = 1.0
        der[:, t, 2 * e + 1] = 1.0
        val[:, h, 2 * e] = c
        val[:, h, 2 * e + 1] = s
        der[:, h, 2 * e] = lam * s  # -(c'(l)) with c' = -lam s
        der[:, h, 2 * e + 1] = -c   # -(s'(l)) with s' = c
    ends: dict[int, list[int]] = {v: [] for v in range(G.n_vertices)}
    for e, edge in enumerate(G.edges):
        ends[edge.tail].append(2 * e)
        ends[edge.head].append(2 * e + 1)
    rows = []
    for v in range(G.n_vertices):
        slots = ends[v]
        if not slots:
            continue
        if G.is_dirichlet(v):
            rows.extend(val[:, i] for i in slots)
            continue
        first = slots[0]
        rows.extend(val[:, i] - val[:, first] for i in slots[1:])
        # scale never vanishes, so identically-zero rows stay zero
        scale = np.maximum(1.0, np.sqrt(np.abs(lam))) + abs(G.couplings[v])
        rows.append((sum(der[:, i] for i in slots) - G.couplings[v] * val[:, first])
                    / scale[:, None])
    return np.stack(rows, axis=1)


def _det(G, lam):
    return np.linalg.det(secular_matrices(G, lam))


def _smin(G, lam):
    return np.linalg.svd(secular_matrices(G, lam), compute_uv=False)[..., -1]


def nullity(G: MetricGraph, lam: float, rtol=NULLITY_RTOL) -> int:
    sv = np.linalg.svd(secular_matrices(G, [lam])[0], compute_uv=False)
    return int(np.sum(sv <= rtol * max(1.0, sv[0])))


def _golden_min(f, a, b, xtol=ROOT_XTOL):
    """Golden-section minimiser; fine for the V-shaped sigma_min near roots."""
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol * max(1.0, abs(a)):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _scan(G, grid, depth):
    """Candidate roots inside ``grid`` (sign changes plus sigma_min dips)."""
    M = secular_matrices(G, grid)
    det = np.linalg.det(M)
    smin = np.linalg.svd(M, compute_uv=False)[:, -1]
    found = []
    f = lambda x: float(_det(G, [x])[0])
    for i in range(len(grid) - 1):
        if det[i] == 0.0:
            found.append(grid[i])
        elif det[i] * det[i + 1] < 0:
            found.append(bisect(f, grid[i], grid[i + 1], xtol=ROOT_XTOL, maxiter=200))
    if det[-1] == 0.0:
        found.append(grid[-1])
    # roots of even multiplicity (or pairs inside one cell) do not flip the sign
    for i in range(1, len(grid) - 1):
        if smin[i] <= smin[i - 1] and smin[i] <= smin[i + 1]:
            lo, hi = grid[i - 1], grid[i + 1]
            if depth == 0:
                found.extend(_scan(G, np.linspace(lo, hi, SUBDIVISIONS + 1), depth + 1))
            found.append(_golden_min(lambda x: float(_smin(G, [x])[0]), lo, hi))
    return found


def _merge(G, cands):
    """Keep genuine roots, merge duplicates, attach multiplicities."""
    roots = []
    for lam in sorted(cands):
        m = nullity(G, lam)
        if m == 0:
            continue
        if roots and abs(lam - roots[-1][0]) <= 1e-7 * max(1.0, abs(lam)):
            if _smin(G, [lam])[0] < _smin(G, [roots[-1][0]])[0]:
                roots[-1] = (lam, max(m, roots[-1][1]))
            continue
        roots.append((lam, m))
    return roots


def secular_floor(G: MetricGraph) -> float:
    neg = sum(-a for a in G.couplings if a < 0)
    lmin = float(np.min(G.lengths))
    return -(4.0 * neg ** 2 + 2.0 * neg / lmin) - 1.0


def secular_spectrum_q0(G: MetricGraph, k: int, step=None, max_span=1e7) -> np.ndarray:
    """First ``k`` eigenvalues (with multiplicity) of the Laplacian on ``G``.

    Scans a uniform lambda grid of spacing ``pi^2 / (4 L^2)`` upward from a
    floor below the spectrum, extending the window until ``k`` roots are
    found. Raises :class:`SecularError` if ``max_span`` is exhausted.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if G.n_edges == 0:
        raise SecularError("graph has no edges")
    L = G.total_length
    if step is None:
        step = math.pi ** 2 / (4.0 * L ** 2)
    lo = secular_floor(G)
    n = 512
    while True:
        grid = lo + step * np.arange(n + 1)
        roots = _merge(G, _scan(G, grid, 0))
        vals = [lam for lam, m in roots for _ in range(m)]
        if len(vals) >= k and vals[k - 1] < grid[-1] - step:
            return np.array(vals[:k])
        if grid[-1] - lo > max_span:
            raise SecularError(
                f"found {len(vals)} of {k} roots below {grid[-1]:.6g}; "
                "retry with a finer step")
        n *= 2
