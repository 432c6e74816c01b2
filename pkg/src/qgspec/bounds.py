"""Closed-form upper bounds for eigenvalues of delta-coupled Schroedinger operators.

Notation used throughout: ``L`` total length, ``P`` number of pendant
vertices, ``beta`` Betti number, ``|E|`` edge count and ``a`` the sum of the
non-negative coupling strengths. ``q_norm`` is ``||max(q, 0)||_p``.

For ``p = inf`` every power ``x ** (1/p)`` is taken to be 1, including at
``x = 0`` (the factor then multiplies ``||q_+||_inf``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graph import GraphInvariants, MetricGraph, graph_invariants
from .potential import Potential, _parse_p, integrate_potential, lp_norm_positive_part

PI2 = math.pi ** 2
ALPHA_ONE_TOL = 1e-9

# bound ids
TRIVIAL = "trivial"
PRINCIPAL_UNIVERSAL_LONGEST = "principal_universal_longest"
PRINCIPAL_UNIVERSAL_EDGES = "principal_universal_edges"
HIGHER_UNIVERSAL = "higher_universal"
PRINCIPAL_EXPLICIT = "principal_explicit"
HIGHER_EXPLICIT = "higher_explicit"
LAPLACIAN_NEUMANN = "laplacian_neumann"
LAPLACIAN_DIRICHLET = "laplacian_dirichlet"

CITATIONS = {
    TRIVIAL: "constant trial function",
    PRINCIPAL_UNIVERSAL_LONGEST: "sine on the longest edge, any couplings",
    PRINCIPAL_UNIVERSAL_EDGES: "sine on the longest edge, l_max >= L/|E|",
    HIGHER_UNIVERSAL: "span of k Dirichlet edge modes, any couplings",
    PRINCIPAL_EXPLICIT: "a*f_D + f_N trial, Kirchhoff eigenvalue bound for f_N",
    HIGHER_EXPLICIT: "span of a*f_j^D + f_j^N, (a-1)^2 lower L2 bound",
    LAPLACIAN_NEUMANN: "Kirchhoff Laplacian bound in pendants and Betti number",
    LAPLACIAN_DIRICHLET: "Dirichlet Weyl counting on edges",
}


class BoundNotApplicable(ValueError):
    """Raised when a bound's hypotheses fail for the given graph."""


def _root(x: float, p: float) -> float:
    """``x ** (1/p)`` with the ``p = inf`` convention."""
    if p == math.inf:
        return 1.0
    return x ** (1.0 / p)


@dataclass(frozen=True)
class TopologyConstants:
    M: float
    M_k: dict = field(default_factory=dict)


def _topology_factor(inv: GraphInvariants) -> float:
    return inv.pendants / 2.0 + 1.5 * inv.betti


def check_topology(inv: GraphInvariants):
    if not inv.connected:
        raise BoundNotApplicable("disconnected")
    if inv.is_cycle:
        raise BoundNotApplicable("cycle")


def topology_constants(inv: GraphInvariants, k_max: int = 2) -> TopologyConstants:
    """``M = pi/sqrt(L) (P/2 + 3 beta/2 - 1)`` and ``M_k = pi/sqrt(L) (k - 2 + P/2 + 3 beta/2)``."""
    check_topology(inv)
    c = math.pi / math.sqrt(inv.total_length)
    t = _topology_factor(inv)
    return TopologyConstants(M=c * (t - 1.0),
                             M_k={k: c * (k - 2 + t) for k in range(2, k_max + 1)})


def bound_trivial(G: MetricGraph, q: Potential, alpha_total=None) -> float:
    if alpha_total is None:
        alpha_total = G.alpha_total
    return (integrate_potential(q) + alpha_total) / G.total_length


def bound_principal_universal(inv: GraphInvariants, q_norm: float, p) -> tuple[float, float]:
    """Returns ``(longest-edge form, |E|/L form)``."""
    p = _parse_p(p)
    lmax, L, E = inv.ell_max, inv.total_length, inv.edge_count
    longest = _root(2.0 / lmax, p) * q_norm + (math.pi / lmax) ** 2
    edges = _root(2.0 * E / L, p) * q_norm + (math.pi * E / L) ** 2
    return longest, edges


def bound_laplacian_dirichlet(inv: GraphInvariants, k: int) -> float:
    return PI2 / inv.total_length ** 2 * (k - 1 + inv.edge_count) ** 2


def bound_higher_universal(inv: GraphInvariants, q_norm: float, p, k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    p = _parse_p(p)
    return _root(2.0 * k / inv.ell_min, p) * q_norm + bound_laplacian_dirichlet(inv, k)


def bound_laplacian_neumann(inv: GraphInvariants, k: int) -> float:
    """Kirchhoff Laplacian bound ``pi^2/L^2 (k - 2 + P/2 + 3 beta/2)^2``."""
    check_topology(inv)
    return PI2 / inv.total_length ** 2 * (k - 2 + _topology_factor(inv)) ** 2


def bound_principal_explicit(inv: GraphInvariants, consts: TopologyConstants,
                             q_norm: float, p, alpha_total: float) -> float:
    check_topology(inv)
    if not (0.0 <= alpha_total < math.inf):
        raise BoundNotApplicable("needs finite non-negative couplings")
    p = _parse_p(p)
    a, L, M = alpha_total, inv.total_length, consts.M
    den = a * a + 1.0
    c1, c2, c3 = a * (a + 1.0) / den, (a + 1.0) / den, a / den
    S = (1.0 / math.sqrt(L) + M) ** 2
    return (q_norm * _root(c1 * 2.0 / inv.ell_max + c2 * S, p)
            + c1 * PI2 / inv.ell_max ** 2 + c2 * M * M / L + c3 * S)


def bound_higher_explicit(inv: GraphInvariants, consts: TopologyConstants,
                          q_norm: float, p, alpha_total: float, k: int) -> float:
    """Higher-eigenvalue bound with ``(a - 1)^2`` denominators; ``inf`` at ``a = 1``."""
    check_topology(inv)
    if k < 2:
        raise BoundNotApplicable("needs k >= 2")
    if not (0.0 <= alpha_total < math.inf):
        raise BoundNotApplicable("needs finite non-negative couplings")
    if abs(alpha_total - 1.0) < ALPHA_ONE_TOL:
        return math.inf
    p = _parse_p(p)
    a, L = alpha_total, inv.total_length
    Mk = consts.M_k[k] if k in consts.M_k else topology_constants(inv, k).M_k[k]
    den = (a - 1.0) ** 2
    d1, d2, d3 = a * (a + 1.0) / den, (a + 1.0) / den, a / den
    return (q_norm * _root(k, p) * _root(d1 * 2.0 / inv.ell_min + d2 * Mk * Mk, p)
            + d1 * bound_laplacian_dirichlet(inv, k) + d2 * Mk * Mk / L + d3 * Mk * Mk)


# -- inequalities for individual functions ----------------------------------

@dataclass(frozen=True)
class FunctionNorms:
    l2: float
    sup: float
    derivative_l2: float
    vertex_sup: float

    @classmethod
    def of(cls, f) -> "FunctionNorms":
        return cls(f.l2_norm(), f.sup_norm(), f.derivative_l2_norm(), f.vertex_sup_norm())


def holder_rayleigh_bound(f=None, q_norm: float = 0.0, p=1, alpha_total: float = 0.0,
                          norms: FunctionNorms | None = None) -> float:
    """Upper bound for the Rayleigh quotient of ``f`` from its norms alone."""
    if norms is None:
        norms = FunctionNorms.of(f)
    if not norms.l2 > 0:
        raise ZeroDivisionError("zero L2 norm")
    p = _parse_p(p)
    n2 = norms.l2 ** 2
    return (q_norm * _root((norms.sup / norms.l2) ** 2, p)
            + (norms.derivative_l2 ** 2 + alpha_total * norms.vertex_sup ** 2) / n2)


def sup_norm_bound(norms: FunctionNorms, L: float, mean_zero: bool = False) -> float:
    """Sup-norm estimate on a connected graph of total length ``L``."""
    tail = math.sqrt(L) * norms.derivative_l2
    return tail if mean_zero else norms.l2 / math.sqrt(L) + tail


# -- reports ----------------------------------------------------------------

@dataclass(frozen=True)
class BoundEntry:
    bound_id: str
    k: int
    p: float | None
    value: float
    applicable: bool
    reason: str = ""
    citation: str = ""


@dataclass
class BoundReport:
    entries: list[BoundEntry] = field(default_factory=list)

    def applicable(self) -> list[BoundEntry]:
        return [e for e in self.entries if e.applicable]

    def get(self, bound_id: str, k: int = 1, p=None) -> BoundEntry:
        p = None if p is None else _parse_p(p)
        for e in self.entries:
            if e.bound_id == bound_id and e.k == k and e.p == p:
                return e
        raise KeyError((bound_id, k, p))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def _entry(bound_id, k, p, fn):
    try:
        value = float(fn())
    except BoundNotApplicable as exc:
        return BoundEntry(bound_id, k, p, math.inf, False, str(exc), CITATIONS[bound_id])
    if bound_id == HIGHER_EXPLICIT and value == math.inf:
        return BoundEntry(bound_id, k, p, value, False, "degenerate at alpha=1",
                          CITATIONS[bound_id])
    return BoundEntry(bound_id, k, p, value, True, "", CITATIONS[bound_id])


def evaluate_all(G: MetricGraph, q: Potential | None = None, p: float | Iterable = (1, 2, math.inf),
                 k_max: int = 5) -> BoundReport:
    """Every bound for ``k <= k_max`` and each exponent in ``p``, with gating.

    Inapplicable entries carry ``applicable=False`` and a reason; nothing is
    raised for hypotheses that fail.
    """
    if q is None:
        q = Potential.zero(G)
    ps = [p] if isinstance(p, (int, float, str)) else list(p)
    ps = [_parse_p(x) for x in ps]
    inv = graph_invariants(G)
    a = G.alpha_total
    q_pos_zero = lp_norm_positive_part(q, math.inf) == 0.0
    nonneg = G.all_couplings_finite_nonnegative
    try:
        consts = topology_constants(inv, max(k_max, 2))
        topo_reason = ""
    except BoundNotApplicable as exc:
        consts, topo_reason = None, str(exc)

    def explicit_gate():
        if consts is None:
            raise BoundNotApplicable(topo_reason)
        if not nonneg:
            raise BoundNotApplicable("needs finite non-negative couplings")

    def trivial():
        if a == math.inf:
            raise BoundNotApplicable("Dirichlet vertex: constant trial not admissible")
        return bound_trivial(G, q, a)

    def neumann(k):
        if consts is None:
            raise BoundNotApplicable(topo_reason)
        if not q_pos_zero or any(c > 0 for c in G.couplings):
            raise BoundNotApplicable("needs q <= 0 and all alpha_v <= 0")
        return bound_laplacian_neumann(inv, k)

    def dirichlet(k):
        if not q_pos_zero:
            raise BoundNotApplicable("needs q <= 0")
        return bound_laplacian_dirichlet(inv, k)

    entries = [_entry(TRIVIAL, 1, None, trivial)]
    for k in range(1, k_max + 1):
        entries.append(_entry(LAPLACIAN_NEUMANN, k, None, lambda k=k: neumann(k)))
        entries.append(_entry(LAPLACIAN_DIRICHLET, k, None, lambda k=k: dirichlet(k)))
    for pp in ps:
        qn = lp_norm_positive_part(q, pp)
        lo, ed = bound_principal_universal(inv, qn, pp)
        entries.append(_entry(PRINCIPAL_UNIVERSAL_LONGEST, 1, pp, lambda: lo))
        entries.append(_entry(PRINCIPAL_UNIVERSAL_EDGES, 1, pp, lambda: ed))

        def principal(qn=qn, pp=pp):
            explicit_gate()
            return bound_principal_explicit(inv, consts, qn, pp, a)

        entries.append(_entry(PRINCIPAL_EXPLICIT, 1, pp, principal))
        for k in range(1, k_max + 1):
            entries.append(_entry(HIGHER_UNIVERSAL, k, pp,
                                  lambda k=k, qn=qn, pp=pp: bound_higher_universal(inv, qn, pp, k)))
        for k in range(2, k_max + 1):
            def higher(k=k, qn=qn, pp=pp):
                explicit_gate()
                return bound_higher_explicit(inv, consts, qn, pp, a, k)

            entries.append(_entry(HIGHER_EXPLICIT, k, pp, higher))
    return BoundReport(entries)


def check_soundness(report: BoundReport, eigenvalues, rtol=1e-3, atol=1e-9) -> list[tuple]:
    """Violations ``(entry, lambda_k)`` of ``lambda_k <= value + rtol |value| + atol``."""
    lam = np.asarray(eigenvalues, dtype=float)
    bad = []
    for e in report.applicable():
        if e.k <= lam.size and not lam[e.k - 1] <= e.value + rtol * abs(e.value) + atol:
            bad.append((e, float(lam[e.k - 1])))
    return bad
