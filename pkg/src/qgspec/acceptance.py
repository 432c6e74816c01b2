"""Acceptance criteria as runnable checks.

Each ``criterion_*`` function returns a :class:`CriterionResult`; ``run_all``
runs them in order. The pytest module ``tests/test_acceptance.py`` and the
``selftest`` CLI command are thin wrappers around this file.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import bounds as B
from .graph import build_graph, graph_invariants, interval, star
from .mesh import Mesh
from .potential import Potential, lp_norm_positive_part
from .random_graphs import (random_admissible_graph, random_constant_potential, random_graph,
                            random_mesh_function, random_nonneg_potential)
from .secular import secular_spectrum_q0
from .solver import exact_dirichlet_spectrum, initial_mesh, solve_on_mesh, solve_spectrum
from .trial import explicit_trial_family, verify_variational_chain

PI2 = math.pi ** 2
P_VALUES = (1.0, 2.0, math.inf)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str = ""
    elapsed: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({self.elapsed:.1f}s)"


def _timed(number, name):
    def deco(fn):
        def run(seed=0):
            t = time.perf_counter()
            passed, detail, failures = fn(seed)
            return CriterionResult(number, name, passed, detail,
                                   time.perf_counter() - t, failures)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return deco


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# 1 ------------------------------------------------------------------------
@_timed(1, "interval sanity")
def criterion_interval(seed=0):
    """Unit interval, q = 0: Dirichlet pi^2 k^2 and Neumann (k-1)^2 pi^2, k <= 5."""
    fails = []
    t = time.perf_counter()
    for alpha, exact in (("inf", [PI2 * k * k for k in range(1, 6)]),
                         (0.0, [PI2 * (k - 1) ** 2 for k in range(1, 6)])):
        res = solve_spectrum(interval(1.0, alpha), None, 5, tol=1e-6)
        for k, (lam, ex) in enumerate(zip(res.eigenvalues, exact), start=1):
            ok = abs(lam - ex) <= 1e-3 * ex if ex > 0 else abs(lam) <= 1e-10
            if not ok:
                fails.append((alpha, k, lam, ex))
    elapsed = time.perf_counter() - t
    if elapsed >= 5.0:
        fails.append(("runtime", elapsed))
    return not fails, f"10 eigenvalues within 0.1%, {elapsed:.2f}s < 5s", fails


# 2 ------------------------------------------------------------------------
def oracle_suite(seed=0, n=25):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        G = random_graph(rng, p_dirichlet=0.2)
        if i % 5 == 0:
            G = G.with_couplings([math.inf] * G.n_vertices)
        out.append(G)
    return out


@_timed(2, "oracle equivalence")
def criterion_oracle(seed=0):
    """FE solver vs secular determinant on 25 random graphs, q = 0, k <= 5."""
    t = time.perf_counter()
    fails = []
    worst = 0.0
    n_dir = 0
    for i, G in enumerate(oracle_suite(seed)):
        fe = solve_spectrum(G, None, 5, tol=1e-5).eigenvalues
        sec = secular_spectrum_q0(G, 5)
        for k in range(5):
            err = abs(fe[k] - sec[k])
            worst = max(worst, err / max(abs(sec[k]), 1e-12))
            if err > 1e-3 * abs(sec[k]) + 1e-8:
                fails.append((i, k + 1, fe[k], sec[k]))
        if all(G.is_dirichlet(v) for v in range(G.n_vertices)):
            n_dir += 1
            ex = exact_dirichlet_spectrum(G, 5)
            if np.max(np.abs(ex - sec)) > 1e-8:
                fails.append((i, "dirichlet", sec, ex))
    elapsed = time.perf_counter() - t
    if elapsed >= 120:
        fails.append(("runtime", elapsed))
    return (not fails,
            f"worst rel diff {worst:.1e}, {n_dir} all-Dirichlet exact, {elapsed:.1f}s", fails)


# 3 ------------------------------------------------------------------------
def soundness_instance(rng, i):
    """Random graph + constant q for the soundness sweep, with structured subsets.

    Every 4th instance has all couplings zero and every 3rd has ``q <= 0`` so
    that the Laplacian-only bounds are exercised as well.
    """
    G = random_graph(rng)
    q = random_constant_potential(rng, G)
    if i % 4 == 0:
        G = G.with_couplings([0.0] * G.n_vertices)
    if i % 3 == 0:
        q = Potential.constant(G, [-abs(c) for c in q.data])
    return G, q


@_timed(3, "bound soundness sweep")
def criterion_soundness(seed=0, n=100):
    """Every applicable bound dominates the solver eigenvalue, p in {1, 2, inf}, k <= 5."""
    rng = np.random.default_rng(seed + 3)
    fails = []
    checked = 0
    covered: dict[str, int] = {}
    for i in range(n):
        G, q = soundness_instance(rng, i)
        res = solve_spectrum(G, q, 5, tol=1e-5)
        rep = B.evaluate_all(G, q, P_VALUES, 5)
        for e in rep.applicable():
            covered[e.bound_id] = covered.get(e.bound_id, 0) + 1
        checked += len(rep.applicable())
        for e, lam in B.check_soundness(rep, res.eigenvalues, rtol=1e-3, atol=1e-9):
            fails.append((i, e.bound_id, e.k, e.p, lam, e.value))
    missing = [b for b in B.CITATIONS if b not in covered]
    if missing:
        fails.append(("never applicable", missing))
    return (not fails,
            f"{checked} applicable entries over {n} instances, {len(fails)} violations",
            fails)


# 4 ------------------------------------------------------------------------
@_timed(4, "sharpness witnesses")
def criterion_sharpness(seed=0):
    """Single unit Dirichlet edge: universal bounds equal the exact eigenvalues."""
    G = interval(1.0, "inf")
    inv = graph_invariants(G)
    exact = exact_dirichlet_spectrum(G, 5)
    fails = []
    for p in P_VALUES:
        lo, _ = B.bound_principal_universal(inv, 0.0, p)
        if abs(lo - exact[0]) > 1e-10:
            fails.append(("principal", p, lo, exact[0]))
        for k in range(1, 6):
            v = B.bound_higher_universal(inv, 0.0, p, k)
            if abs(v - exact[k - 1]) > 1e-10:
                fails.append(("higher", p, k, v, exact[k - 1]))
    return not fails, "principal and higher universal bounds exact to 1e-10", fails


# 5 ------------------------------------------------------------------------
@_timed(5, "coupling limits on the 3-star")
def criterion_limits(seed=0):
    """``sweep-alpha`` on the 3-star: lambda_1 rises from the Kirchhoff value to pi^2."""
    from .cli import RunConfig, sweep_table

    G = star([1.0, 1.0, 1.0], 1.0)
    cfg = RunConfig("sweep-alpha", k=1, p=(2.0,), tol=1e-7, sweep=(1e-2, 1e4, 25), seed=seed)
    header, rows, _ = sweep_table(G, Potential.zero(G), cfg)
    scale = [r[0] for r in rows]
    lam = [r[3] for r in rows]
    err = [r[4] for r in rows]
    fails = []
    for i in range(len(rows) - 1):
        if lam[i + 1] < lam[i] - (err[i] + err[i + 1]) - 1e-12:
            fails.append(("monotone", scale[i], scale[i + 1], lam[i], lam[i + 1]))
    if _rel(lam[-1], PI2) > 0.01:
        fails.append(("dirichlet limit", lam[-1]))
    # lambda_1 of the Kirchhoff star is 0 with a constant eigenfunction, so the
    # first-order correction is alpha_total / L
    first_order = 0.0 + rows[0][1] / G.total_length
    if _rel(lam[0], first_order) > 0.01:
        fails.append(("kirchhoff limit", lam[0], first_order))
    trivial = rows[0][header.index(B.TRIVIAL)]
    if trivial is None or not lam[0] <= trivial + 1e-12:
        fails.append(("trivial bound", lam[0], trivial))
    return (not fails,
            f"lambda_1: {lam[0]:.6g} at scale 1e-2 (first order {first_order:.6g}), "
            f"{lam[-1]:.6g} at 1e4 (pi^2 = {PI2:.6g})", fails)


# 6 ------------------------------------------------------------------------
@_timed(6, "coefficient collapse at alpha = 0")
def criterion_collapse(seed=0):
    rng = np.random.default_rng(seed + 6)
    fails = []
    for i in range(20):
        G = random_admissible_graph(rng)
        inv = graph_invariants(G)
        consts = B.topology_constants(inv, 5)
        for k in range(2, 6):
            for p in P_VALUES:
                a = B.bound_higher_explicit(inv, consts, 0.0, p, 0.0, k)
                b = B.bound_laplacian_neumann(inv, k)
                if abs(a - b) > 1e-12 * max(1.0, abs(b)):
                    fails.append((i, k, p, a, b))
    return not fails, "20 graphs x k=2..5 x 3 exponents agree to 1e-12", fails


# 7 ------------------------------------------------------------------------
@_timed(7, "function inequalities")
def criterion_function_inequalities(seed=0, n=200):
    """Sup-norm embedding (plain and mean-zero) and the Hoelder Rayleigh bound."""
    from .solver import rayleigh_quotient

    rng = np.random.default_rng(seed + 7)
    fails = []
    for i in range(n):
        G = random_graph(rng, connected=True)
        f = random_mesh_function(rng, G)
        L = G.total_length
        norms = B.FunctionNorms.of(f)
        if f.sup_norm() > B.sup_norm_bound(norms, L) * (1 + 1e-12):
            fails.append((i, "sup"))
        g = f - f.mean()
        if g.sup_norm() > B.sup_norm_bound(B.FunctionNorms.of(g), L, mean_zero=True) * (1 + 1e-12) + 1e-14:
            fails.append((i, "sup mean-zero"))
        q = random_nonneg_potential(rng, G)
        R = rayleigh_quotient(G, q, f)
        for p in P_VALUES:
            qn = lp_norm_positive_part(q, p)
            hb = B.holder_rayleigh_bound(f, qn, p, G.alpha_total, norms)
            if R > hb * (1 + 1e-12):
                fails.append((i, "holder", p, R, hb))
    return not fails, f"{n} random functions, {len(fails)} violations", fails


# 8 ------------------------------------------------------------------------
@_timed(8, "discrete structure invariants")
def criterion_discrete(seed=0, n=25):
    """alpha-monotonicity, Neumann/Dirichlet bracketing and refinement monotonicity."""
    rng = np.random.default_rng(seed + 8)
    fails = []
    k = 5
    atol = 1e-10

    def le(a, b):
        return np.all(a <= b + atol * np.maximum(1.0, np.abs(b)))

    for i in range(n):
        G = random_graph(rng)
        q = random_constant_potential(rng, G)
        mesh0 = Mesh.uniform(G, float(np.min(G.lengths)) / 6)  # >= 6 intervals per edge
        ints = mesh0.intervals
        alpha = np.array(G.couplings)
        bigger = alpha + rng.uniform(0, 20, size=alpha.size)
        lam = solve_on_mesh(Mesh(G, ints), q, k)[0]
        lam2 = solve_on_mesh(Mesh(G.with_couplings(bigger), ints), q, k)[0]
        lamN = solve_on_mesh(Mesh(G.with_couplings([0.0] * G.n_vertices), ints), q, k)[0]
        lamD = solve_on_mesh(Mesh(G.with_couplings([math.inf] * G.n_vertices), ints), q, k)[0]
        lamR = solve_on_mesh(Mesh(G, ints).refined(), q, k)[0]
        if not le(lam, lam2):
            fails.append((i, "alpha monotone"))
        if not (le(lamN, lam) and le(lam, lamD)):
            fails.append((i, "bracketing"))
        if not le(lamR, lam):
            fails.append((i, "refinement"))
    return not fails, f"{n} graphs, k={k}, {len(fails)} violations", fails


# 9 ------------------------------------------------------------------------
def rank_test_graphs(seed=0, n=10):
    rng = np.random.default_rng(seed + 9)
    named = [interval(1.0), star([1.0, 1.0, 1.0]), star([1.0, 0.5, 0.7]),
             build_graph(3, [(0, 1, 1.0), (1, 2, 1.0)]),
             build_graph(2, [(0, 1, 1.0), (0, 1, 1.0), (0, 1, 1.0)]),
             build_graph(2, [(0, 0, 1.0), (0, 1, 1.0)])]
    return named + [random_admissible_graph(rng) for _ in range(n)]


@_timed(9, "trial-family rank")
def criterion_rank(seed=0):
    fails = []
    smallest = math.inf
    graphs = rank_test_graphs(seed)
    for gi, G in enumerate(graphs):
        mesh = initial_mesh(G).refined().refined()
        for a in (0.0, 0.5, 1.0, 2.0, 10.0):
            for k in range(1, 5):
                fam = explicit_trial_family(G, k, a, mesh)
                s = fam.smallest_singular_value()
                smallest = min(smallest, s)
                if not s > 1e-6:
                    fails.append((gi, a, k, s))
    return not fails, f"{len(graphs)} graphs, smallest singular value {smallest:.3e}", fails


# 10 -----------------------------------------------------------------------
@_timed(10, "variational chain")
def criterion_chain(seed=0, n=20):
    rng = np.random.default_rng(seed + 10)
    fails = []
    for i in range(n):
        G = random_admissible_graph(rng)
        q = random_nonneg_potential(rng, G)
        p = P_VALUES[i % 3]
        rep = verify_variational_chain(G, q, p=p, k=3, rtol=1e-3)
        if not rep.ok or not any(s.kind == "explicit" for s in rep.steps):
            fails.append((i, [s for s in rep.steps if not s.ok], rep.checks, rep.notes))
    return not fails, f"{n} admissible instances, k <= 3", fails


CRITERIA = [criterion_interval, criterion_oracle, criterion_soundness, criterion_sharpness,
            criterion_limits, criterion_collapse, criterion_function_inequalities,
            criterion_discrete, criterion_rank, criterion_chain]


def run_all(seed=0, echo=print) -> list[CriterionResult]:
    results = []
    for fn in CRITERIA:
        r = fn(seed)
        if echo is not None:
            echo(r.line())
        results.append(r)
    return results
