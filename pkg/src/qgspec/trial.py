"""Explicit trial functions and numerical checks of the variational chain.

Trial spaces are spanned by ``a * f_j^D + f_j^N``, where ``f_j^D`` are
normalised Dirichlet sine modes living on single edges and ``f_j^N`` are
normalised Kirchhoff (all couplings zero) eigenfunctions.  For every trial
space the largest Rayleigh quotient is computed exactly on the mesh by a
small generalised eigenproblem, and compared against the solver eigenvalue
(from below) and against the closed-form bound (from above).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import bounds as B
from .graph import MetricGraph, graph_invariants
from .mesh import Mesh, MeshFunction, assemble_discrete_forms
from .potential import Potential, lp_norm_positive_part
from .solver import dirichlet_modes, initial_mesh, solve_on_mesh, solve_spectrum

RANK_TOL = 1e-8


class TrialRankError(RuntimeError):
    pass


@dataclass
class TrialFamily:
    members: list
    labels: list = field(default_factory=list)
    alpha: float | None = None

    @property
    def k(self) -> int:
        return len(self.members)

    @property
    def gram(self) -> np.ndarray:
        k = self.k
        g = np.empty((k, k))
        for i in range(k):
            for j in range(i, k):
                g[i, j] = g[j, i] = self.members[i].inner(self.members[j])
        return g

    def smallest_singular_value(self) -> float:
        return float(np.linalg.svd(self.gram, compute_uv=False)[-1])

    def has_full_rank(self, tol=RANK_TOL) -> bool:
        s = np.linalg.svd(self.gram, compute_uv=False)
        return bool(s[-1] > tol * max(1.0, s[0]))


def _default_mesh(G: MetricGraph, mesh: Mesh | None) -> Mesh:
    return mesh if mesh is not None else initial_mesh(G).refined().refined()


def _edge_sine(mesh: Mesh, edge: int, freq: float) -> MeshFunction:
    l = mesh.graph.edges[edge].length
    amp = math.sqrt(2.0 / l)

    def fn(e, x):
        if e != edge:
            return np.zeros_like(x)
        y = amp * np.sin(freq * x)
        y[0] = y[-1] = 0.0  # exact zeros at the vertices
        return y

    f = MeshFunction.from_callable(mesh, fn)
    return f * (1.0 / f.l2_norm())  # unit norm in the discrete L2 product


def dirichlet_sine_longest(G: MetricGraph, mesh: Mesh | None = None) -> MeshFunction:
    """``sqrt(2/l) sin(pi x / l)`` on the longest edge, zero elsewhere."""
    mesh = _default_mesh(G, mesh)
    e = G.longest_edge()
    return _edge_sine(mesh, e, math.pi / G.edges[e].length)


def dirichlet_sine_family(G: MetricGraph, k: int, mesh: Mesh | None = None) -> TrialFamily:
    """The first ``k`` merged Dirichlet modes, one edge each."""
    mesh = _default_mesh(G, mesh)
    modes = dirichlet_modes(G, k)
    members = [_edge_sine(mesh, e, math.sqrt(lam)) for lam, e, _ in modes]
    return TrialFamily(members, [(e, j) for _, e, j in modes])


def _fix_sign(fN: MeshFunction, fD: MeshFunction | None) -> MeshFunction:
    s = fN.inner(fD) if fD is not None else 0.0
    if abs(s) > 1e-12:
        return fN if s > 0 else -fN
    # orthogonal pair: make the first clearly nonzero nodal value positive
    for v in fN.values:
        big = np.flatnonzero(np.abs(v) > 1e-8)
        if big.size:
            return fN if v[big[0]] > 0 else -fN
    return fN


def neumann_modes(G: MetricGraph, k: int, mesh: Mesh | None = None,
                  partners: list | None = None, tol=1e-6) -> list:
    """First ``k`` normalised Kirchhoff eigenfunctions (q = 0, all couplings 0).

    With ``mesh`` the modes are the discrete eigenfunctions on that mesh;
    otherwise ``solve_spectrum`` picks the mesh. Mode ``j`` is sign-fixed so
    that its inner product with ``partners[j]`` is non-negative.
    Degenerate eigenvalues get whatever orthonormal basis the solver returns.
    """
    G0 = G.with_couplings([0.0] * G.n_vertices)
    q0 = Potential.zero(G0)
    if mesh is None:
        res = solve_spectrum(G0, q0, k, tol=tol)
        funcs = res.eigenfunctions
    else:
        m0 = Mesh(G0, mesh.intervals)
        _, V = solve_on_mesh(m0, q0, k)
        funcs = [MeshFunction.from_dofs(m0, V[:, j]) for j in range(k)]
    funcs = [f * (1.0 / f.l2_norm()) for f in funcs]
    if partners is None:
        partners = [None] * k
    return [_fix_sign(f, p) for f, p in zip(funcs, partners)]


def neumann_mode(G: MetricGraph, j: int, mesh: Mesh | None = None,
                 partner: MeshFunction | None = None) -> MeshFunction:
    if j < 1:
        raise ValueError("j must be >= 1")
    if partner is None:
        partner = dirichlet_sine_family(G, j, mesh).members[-1] if mesh is not None else None
    f = neumann_modes(G, j, mesh)[-1]
    if partner is None:
        partner = dirichlet_sine_family(G, j, f.mesh).members[-1]
    return _fix_sign(f, partner)


def combined_trial(alpha: float, fD: MeshFunction, fN: MeshFunction) -> MeshFunction:
    """``alpha * fD + fN`` on the finer of the two meshes."""
    if sum(fD.mesh.intervals) >= sum(fN.mesh.intervals):
        return fD * alpha + fN.resample(fD.mesh)
    return fD.resample(fN.mesh) * alpha + fN


def explicit_trial_family(G: MetricGraph, k: int, alpha: float,
                          mesh: Mesh | None = None) -> TrialFamily:
    """``{alpha f_j^D + f_j^N : j <= k}``, sign-paired mode by mode."""
    mesh = _default_mesh(G, mesh)
    dfam = dirichlet_sine_family(G, k, mesh)
    fns = neumann_modes(G, k, mesh, partners=dfam.members)
    members = [combined_trial(alpha, d, n) for d, n in zip(dfam.members, fns)]
    return TrialFamily(members, dfam.labels, alpha)


def trial_space_extremes(G: MetricGraph, q: Potential, family: TrialFamily):
    """``(min, max)`` Rayleigh quotient over the span of ``family``.

    Raises :class:`TrialRankError` if the members are linearly dependent.
    """
    if not family.has_full_rank():
        raise TrialRankError(
            f"trial family is rank deficient (smallest Gram singular value "
            f"{family.smallest_singular_value():.3e})")
    mesh = Mesh(G, family.members[0].mesh.intervals)
    A, Bm, _ = assemble_discrete_forms(G, q, mesh=mesh)
    U = np.column_stack([MeshFunction(mesh, f.resample(mesh).values, check=False).to_dofs()
                         for f in family.members])
    H = U.T @ (A @ U)
    S = U.T @ (Bm @ U)
    w = sla.eigh(0.5 * (H + H.T), 0.5 * (S + S.T), eigvals_only=True)
    return float(w[0]), float(w[-1])


@dataclass
class ChainStep:
    kind: str          # "explicit" or "universal"
    k: int
    eigenvalue: float
    trial_max: float
    bound: float
    lower_ok: bool
    upper_ok: bool
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok


@dataclass
class ChainReport:
    steps: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.steps) and all(self.checks.values())


def _le(a, b, rtol):
    return bool(a <= b + rtol * abs(b) + 1e-9)


def verify_variational_chain(G: MetricGraph, q: Potential | None = None, p=2, k: int = 3,
                             tol=1e-5, rtol=1e-3) -> ChainReport:
    """Check ``lambda_j <= max R(span) <= bound`` for ``j = 1..k``.

    The universal chain (span of Dirichlet modes) always runs. The explicit
    chain (span of ``a f_j^D + f_j^N``) needs a connected non-cycle graph with
    finite non-negative couplings; otherwise it is skipped with a note.
    Every inequality is allowed a relative slack ``rtol``.
    """
    if q is None:
        q = Potential.zero(G)
    res = solve_spectrum(G, q, k, tol=tol)
    lam = res.eigenvalues
    mesh = res.mesh
    inv = graph_invariants(G)
    rep = ChainReport()
    qn = lp_norm_positive_part(q, p)
    a = G.alpha_total

    dfam = dirichlet_sine_family(G, k, mesh)
    for j in range(1, k + 1):
        fam = TrialFamily(dfam.members[:j], dfam.labels[:j])
        _, top = trial_space_extremes(G, q, fam)
        bnd = B.bound_higher_universal(inv, qn, p, j)
        rep.steps.append(ChainStep("universal", j, float(lam[j - 1]), top, bnd,
                                   _le(lam[j - 1], top, rtol), _le(top, bnd, rtol)))

    reason = ""
    try:
        consts = B.topology_constants(inv, max(k, 2))
    except B.BoundNotApplicable as exc:
        reason = str(exc)
    if not reason and not G.all_couplings_finite_nonnegative:
        reason = "needs finite non-negative couplings"
    if reason:
        rep.notes.append(f"explicit chain skipped: {reason}")
        return rep

    fam = explicit_trial_family(G, k, a, mesh)
    for j in range(1, k + 1):
        sub = TrialFamily(fam.members[:j], fam.labels[:j], a)
        try:
            _, top = trial_space_extremes(G, q, sub)
        except TrialRankError as exc:
            rep.checks[f"rank k={j}"] = False
            rep.notes.append(str(exc))
            continue
        if j == 1:
            bnd = B.bound_principal_explicit(inv, consts, qn, p, a)
        else:
            bnd = B.bound_higher_explicit(inv, consts, qn, p, a, j)
        note = "degenerate at alpha=1" if bnd == math.inf else ""
        rep.steps.append(ChainStep("explicit", j, float(lam[j - 1]), top, bnd,
                                   _le(lam[j - 1], top, rtol), _le(top, bnd, rtol), note))

    # intermediate inequalities for the principal trial function
    fD, fN = dfam.members[0], fam.members[0] - dfam.members[0] * a
    f = fam.members[0]
    rep.checks["energy triangle"] = _le(
        f.derivative_l2_norm() ** 2,
        (a * fD.derivative_l2_norm() + fN.derivative_l2_norm()) ** 2, 1e-10)
    rep.checks["vertex sup"] = _le(f.vertex_sup_norm(), fN.vertex_sup_norm(), 1e-10)
    rep.checks["l2 lower"] = _le(a * a + 1.0, f.l2_norm() ** 2, 1e-8)
    for j, g in enumerate(fam.members[1:], start=2):
        gN = g - dfam.members[j - 1] * a
        rep.checks[f"mean zero N{j}"] = abs(gN.integral()) <= 1e-8 * max(1.0, G.total_length)
    return rep
