"""Real potentials on the edges of a metric graph.

Each edge carries one of three representations, all in the edge coordinate
``x in [0, length]``:

* ``constant``: a single value,
* ``poly``: coefficients in ascending powers of ``x``,
* ``samples``: values at equally spaced nodes (linear interpolation between).

Integrals use composite Simpson with dyadic refinement, split at sample nodes
and at sign changes so that the positive part stays smooth on every piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import MetricGraph

KINDS = ("constant", "poly", "samples")

SIMPSON_RTOL = 1e-9
SIMPSON_ATOL = 1e-12
SIMPSON_MAX_LEVEL = 22


class PotentialError(ValueError):
    pass


@dataclass(frozen=True)
class Potential:
    """Per-edge potential; ``data[e]`` is a float (constant) or a 1-d array."""

    kind: str
    lengths: tuple[float, ...]
    data: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PotentialError(f"unknown potential kind {self.kind!r}")
        if len(self.data) != len(self.lengths):
            raise PotentialError(
                f"potential defined on {len(self.data)} edges, graph has {len(self.lengths)}")
        for e, d in enumerate(self.data):
            arr = np.atleast_1d(np.asarray(d, dtype=float))
            if not np.all(np.isfinite(arr)):
                raise PotentialError(f"edge {e}: potential values must be finite")
            if self.kind == "samples" and arr.size < 2:
                raise PotentialError(f"edge {e}: need at least 2 samples")
            if self.kind == "poly" and arr.size < 1:
                raise PotentialError(f"edge {e}: empty coefficient list")

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, G: MetricGraph) -> "Potential":
        return cls.constant(G, 0.0)

    @classmethod
    def constant(cls, G: MetricGraph, values) -> "Potential":
        vals = np.broadcast_to(np.asarray(values, dtype=float), (G.n_edges,))
        return cls("constant", tuple(G.lengths), tuple(float(v) for v in vals))

    @classmethod
    def poly(cls, G: MetricGraph, coeffs: Sequence[Sequence[float]]) -> "Potential":
        return cls("poly", tuple(G.lengths),
                   tuple(np.asarray(c, dtype=float).copy() for c in coeffs))

    @classmethod
    def samples(cls, G: MetricGraph, values: Sequence[Sequence[float]]) -> "Potential":
        return cls("samples", tuple(G.lengths),
                   tuple(np.asarray(v, dtype=float).copy() for v in values))

    def matches(self, G: MetricGraph) -> bool:
        return len(self.lengths) == G.n_edges and np.allclose(self.lengths, G.lengths)

    @property
    def is_zero(self) -> bool:
        return all(np.all(np.asarray(d) == 0.0) for d in self.data)

    # -- evaluation -------------------------------------------------------
    def values(self, e: int, x) -> np.ndarray:
        """Vectorised evaluation on edge ``e`` (no range check)."""
        x = np.asarray(x, dtype=float)
        d = self.data[e]
        if self.kind == "constant":
            return np.full(x.shape, d)
        if self.kind == "poly":
            return np.polynomial.polynomial.polyval(x, d)
        nodes = np.linspace(0.0, self.lengths[e], len(d))
        return np.interp(x, nodes, d)

    def breakpoints(self, e: int) -> np.ndarray:
        """Points in ``[0, l_e]`` where ``max(q, 0)`` may fail to be smooth."""
        l = self.lengths[e]
        d = self.data[e]
        pts = [0.0, l]
        if self.kind == "samples":
            nodes = np.linspace(0.0, l, len(d))
            pts.extend(nodes)
            # zero crossings of the interpolant
            for i in range(len(d) - 1):
                a, b = d[i], d[i + 1]
                if a * b < 0:
                    pts.append(nodes[i] + (nodes[i + 1] - nodes[i]) * a / (a - b))
        elif self.kind == "poly" and len(d) > 1:
            pts.extend(_real_roots(d, l))
        return np.unique(np.clip(pts, 0.0, l))


def _real_roots(c, length) -> np.ndarray:
    """Real roots in ``(0, length)``; negligible leading coefficients are dropped first."""
    c = np.asarray(c, dtype=float)
    big = np.flatnonzero(np.abs(c) > 1e-14 * np.max(np.abs(c), initial=0.0))
    if big.size == 0 or big[-1] == 0:
        return np.empty(0)
    roots = np.polynomial.polynomial.polyroots(c[:big[-1] + 1])
    real = roots[np.abs(roots.imag) < 1e-12].real
    return real[(real > 0.0) & (real < length)]


def eval_potential(q: Potential, e: int, x: float) -> float:
    if not 0 <= e < len(q.lengths):
        raise PotentialError(f"edge index {e} out of range")
    l = q.lengths[e]
    if not (-1e-12 * l <= x <= l * (1 + 1e-12)):
        raise PotentialError(f"x={x} outside edge {e} interval [0, {l}]")
    return float(q.values(e, min(max(x, 0.0), l)))


def simpson(f, a: float, b: float, rtol=SIMPSON_RTOL, atol=SIMPSON_ATOL,
            max_level=SIMPSON_MAX_LEVEL):
    """Composite Simpson on ``[a, b]`` with dyadic refinement.

    Returns ``(integral, grid)``; ``grid`` is the last set of nodes used.
    """
    n = 8
    x = np.linspace(a, b, n + 1)
    y = f(x)
    old = _simpson_sum(y, (b - a) / n)
    for _ in range(max_level):
        n *= 2
        x_new = np.linspace(a, b, n + 1)
        y_new = np.empty(n + 1)
        y_new[::2] = y
        y_new[1::2] = f(x_new[1::2])
        x, y = x_new, y_new
        new = _simpson_sum(y, (b - a) / n)
        if abs(new - old) <= max(rtol * abs(new), atol):
            return new, x
        old = new
    return old, x


def _simpson_sum(y, h):
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def _edge_integral(q: Potential, e: int, integrand):
    pts = q.breakpoints(e)
    total = 0.0
    grid = []
    for a, b in zip(pts[:-1], pts[1:]):
        if b - a <= 0:
            continue
        val, x = simpson(lambda s: integrand(q.values(e, s)), a, b)
        total += val
        grid.append(x)
    return total, (np.concatenate(grid) if grid else np.array([0.0]))


def _parse_p(p) -> float:
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity", "oo"):
            return math.inf
        p = float(p)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise PotentialError(f"exponent p must be >= 1, got {p}")
    return p


def lp_norm_positive_part(q: Potential, p) -> float:
    """``||max(q, 0)||_{L^p}`` over the whole graph; ``p`` may be ``inf``."""
    p = _parse_p(p)
    if p == math.inf:
        best = 0.0
        for e in range(len(q.lengths)):
            _, grid = _edge_integral(q, e, lambda v: v)
            if q.kind == "poly" and len(q.data[e]) > 2:
                crit = _real_roots(np.polynomial.polynomial.polyder(q.data[e]), q.lengths[e])
                grid = np.concatenate([grid, crit])
            best = max(best, float(np.max(np.maximum(q.values(e, grid), 0.0))))
        return best
    if q.kind == "constant":
        s = sum(max(c, 0.0) ** p * l for c, l in zip(q.data, q.lengths))
    else:
        s = sum(_edge_integral(q, e, lambda v: np.maximum(v, 0.0) ** p)[0]
                for e in range(len(q.lengths)))
    return float(s ** (1.0 / p))


def integrate_potential(q: Potential) -> float:
    """Signed integral of ``q`` over the graph."""
    if q.kind == "constant":
        return float(sum(c * l for c, l in zip(q.data, q.lengths)))
    return float(sum(_edge_integral(q, e, lambda v: v)[0] for e in range(len(q.lengths))))


def q_positive_vanishes(q: Potential) -> bool:
    """True when ``q <= 0`` everywhere (checked at all breakpoints and extrema)."""
    return lp_norm_positive_part(q, math.inf) == 0.0
