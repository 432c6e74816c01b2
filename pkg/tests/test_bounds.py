import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qgspec import bounds as B
from qgspec.graph import build_graph, cycle, flower, graph_invariants, interval, path, star
from qgspec.mesh import Mesh, MeshFunction
from qgspec.potential import Potential
from qgspec.random_graphs import random_admissible_graph
from qgspec.secular import secular_spectrum_q0
from qgspec.solver import exact_dirichlet_spectrum
from qgspec.trial import dirichlet_sine_longest

PI2 = math.pi ** 2
INF = math.inf
STAR3 = graph_invariants(star([1.0] * 3))
P3 = graph_invariants(path([1.0, 1.0]))


def test_topology_constants():
    assert B.topology_constants(P3).M == pytest.approx(0.0, abs=1e-15)
    c = B.topology_constants(STAR3, 3)
    assert c.M == pytest.approx(math.pi / (2 * math.sqrt(3)))
    assert c.M_k[2] == pytest.approx(1.5 * math.pi / math.sqrt(3))
    assert c.M_k[2] >= c.M and c.M_k[3] > c.M_k[2]


def test_topology_gating():
    with pytest.raises(B.BoundNotApplicable, match="cycle"):
        B.topology_constants(graph_invariants(cycle([1.0, 1.0])))
    G = build_graph(4, [(0, 1, 1.0), (2, 3, 1.0)])
    with pytest.raises(B.BoundNotApplicable, match="disconnected"):
        B.topology_constants(graph_invariants(G))


def test_trivial():
    G = star([1.0] * 3)
    assert B.bound_trivial(G, Potential.zero(G)) == 0.0
    G1 = G.with_couplings([1.0] * 4)
    assert B.bound_trivial(G1, Potential.zero(G1)) == pytest.approx(4 / 3)
    G2 = path([1.0, 1.0])
    assert B.bound_trivial(G2, Potential.constant(G2, -1.0)) == pytest.approx(-1.0)


def test_principal_universal():
    I = graph_invariants(interval())
    lo, _ = B.bound_principal_universal(I, 0.0, 2)
    assert lo == pytest.approx(PI2)
    lo, _ = B.bound_principal_universal(I, 5.0, INF)
    assert lo == pytest.approx(5 + PI2)
    _, ed = B.bound_principal_universal(STAR3, 0.0, 1)
    assert ed == pytest.approx(PI2)
    # (2/l)^(1/p) ||q||_p with l = 1, p = 2
    lo, ed = B.bound_principal_universal(I, 3.0, 2)
    assert lo == pytest.approx(math.sqrt(2) * 3 + PI2)
    assert ed == pytest.approx(math.sqrt(2) * 3 + PI2)


def test_higher_universal():
    I = graph_invariants(interval())
    assert B.bound_higher_universal(I, 0.0, 1, 2) == pytest.approx(4 * PI2)
    assert B.bound_higher_universal(I, 0.0, INF, 5) == pytest.approx(25 * PI2)
    two = graph_invariants(path([1.0, 0.5]))
    v = B.bound_higher_universal(two, 0.0, 2, 1)
    assert v == pytest.approx(4 * PI2 / 2.25) and v >= exact_dirichlet_spectrum(path([1, .5]), 1)[0]
    # q term: (2k / l_min)^(1/p) ||q||_p
    assert B.bound_higher_universal(two, 2.0, 1, 3) - B.bound_higher_universal(two, 0.0, 1, 3) \
        == pytest.approx(12 * 2.0)


def test_principal_explicit():
    cP3 = B.topology_constants(P3)
    assert B.bound_principal_explicit(P3, cP3, 0.0, 2, 0.0) == pytest.approx(0.0, abs=1e-14)
    I = graph_invariants(interval())
    cI = B.topology_constants(I)
    assert B.bound_principal_explicit(I, cI, 0.0, 2, 1.0) == pytest.approx(PI2 + 0.5)


def test_principal_explicit_large_alpha_limit():
    c = B.topology_constants(STAR3)
    vals = {a: B.bound_principal_explicit(STAR3, c, 0.0, 2, a) for a in (1e3, 1e4, 1e6)}
    assert vals[1e6] == pytest.approx(PI2, rel=1e-4)
    # the excess over pi^2 decays like 1/a
    r = (vals[1e3] - PI2) / (vals[1e4] - PI2)
    assert r == pytest.approx(10.0, rel=0.01)


def test_higher_explicit_star():
    c = B.topology_constants(STAR3, 2)
    # d1 = 3, d2 = 1, d3 = 3/4, M_2^2 = 0.75 pi^2, L = 3, |E| = 3
    expected = (3 * 16 / 9 + 0.75 / 3 + 0.75 * 0.75) * PI2
    assert B.bound_higher_explicit(STAR3, c, 0.0, 2, 3.0, 2) == pytest.approx(expected)
    assert expected == pytest.approx(60.6567, rel=1e-5)


def test_higher_explicit_alpha_one_is_infinite():
    c = B.topology_constants(STAR3, 2)
    assert B.bound_higher_explicit(STAR3, c, 0.0, 2, 1.0, 2) == INF
    G = star([1.0] * 3).with_couplings([0.25] * 4)
    e = B.evaluate_all(G, None, 2, 2).get(B.HIGHER_EXPLICIT, 2, 2)
    assert not e.applicable and e.value == INF and "alpha=1" in e.reason


def test_laplacian_neumann():
    # (pi^2/9) (0 + 3/2)^2 = pi^2/4, attained by the second Kirchhoff eigenvalue
    assert B.bound_laplacian_neumann(STAR3, 2) == pytest.approx(PI2 / 4)
    assert secular_spectrum_q0(star([1.0] * 3), 2)[1] == pytest.approx(PI2 / 4, rel=1e-10)
    assert B.bound_laplacian_neumann(P3, 1) == pytest.approx(0.0, abs=1e-15)
    fig8 = graph_invariants(flower([1.0, 1.0]))
    assert B.bound_laplacian_neumann(fig8, 1) == pytest.approx(PI2)


def test_laplacian_dirichlet():
    I = graph_invariants(interval())
    for k in range(1, 5):
        assert B.bound_laplacian_dirichlet(I, k) == pytest.approx(PI2 * k * k)
    assert B.bound_laplacian_dirichlet(graph_invariants(path([1, .5])), 1) \
        == pytest.approx(16 * PI2 / 9)
    assert B.bound_laplacian_dirichlet(STAR3, 3) == pytest.approx(25 * PI2 / 9)


def test_holder_examples():
    G = star([1.0, 2.0], 0.0).with_couplings([0.5, 1.0, 1.5])
    mesh = Mesh.uniform(G, 0.25)
    one = MeshFunction.constant(mesh, 1.0)
    c, L = 2.0, 3.0
    assert B.holder_rayleigh_bound(one, c * L, 1, G.alpha_total) == pytest.approx(c + 3.0 / L)
    fD = dirichlet_sine_longest(G, mesh.refined().refined().refined())
    v = B.holder_rayleigh_bound(fD, 0.0, 2, 100.0)
    assert v == pytest.approx(PI2 / 4, rel=1e-3)
    with pytest.raises(ZeroDivisionError):
        B.holder_rayleigh_bound(MeshFunction.constant(mesh, 0.0), 0.0, 1, 0.0)


def test_sup_norm_examples():
    G = path([1.0, 2.0])
    f = MeshFunction.constant(Mesh.uniform(G, 0.5), -3.0)
    assert B.sup_norm_bound(B.FunctionNorms.of(f), G.total_length) == pytest.approx(3.0)
    n = B.FunctionNorms(l2=2.0, sup=0.0, derivative_l2=1.0, vertex_sup=0.0)
    assert B.sup_norm_bound(n, 4.0) == pytest.approx(1.0 + 2.0)
    assert B.sup_norm_bound(n, 4.0, mean_zero=True) == pytest.approx(2.0)


def test_evaluate_all_gating_dirichlet_interval():
    rep = B.evaluate_all(interval(1.0, "inf"), None, 2, 1)
    e = rep.get(B.PRINCIPAL_UNIVERSAL_LONGEST, 1, 2)
    assert e.applicable and e.value == pytest.approx(PI2)
    assert not rep.get(B.PRINCIPAL_EXPLICIT, 1, 2).applicable
    assert not rep.get(B.TRIVIAL, 1).applicable


def test_evaluate_all_cycle():
    rep = B.evaluate_all(cycle([1.0, 2.0], 1.0), None, (1, INF), 3)
    for e in rep:
        if e.bound_id in (B.PRINCIPAL_EXPLICIT, B.HIGHER_EXPLICIT, B.LAPLACIAN_NEUMANN):
            assert not e.applicable and e.reason == "cycle"
    assert all(e.citation for e in rep)


def test_evaluate_all_path():
    rep = B.evaluate_all(path([1.0, 1.0]), None, 2, 1)
    assert rep.get(B.TRIVIAL).value == 0.0
    assert rep.get(B.PRINCIPAL_EXPLICIT, 1, 2).value == pytest.approx(0.0, abs=1e-14)


def test_report_entries_finite_when_applicable():
    rep = B.evaluate_all(star([1.0, 0.4, 2.0], 2.0), Potential.constant(star([1, .4, 2]), 3.0),
                         (1, 2, INF), 5)
    assert len(rep) > 0
    for e in rep.applicable():
        assert math.isfinite(e.value)


def test_p_infinity_convention():
    # x ** (1/p) with p = inf is 1 even at x = 0
    assert B._root(0.0, INF) == 1.0 and B._root(7.0, INF) == 1.0
    assert B._root(8.0, 3) == pytest.approx(2.0)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([1.0, 2.0, INF]))
def test_collapse_at_alpha_zero(seed, p):
    G = random_admissible_graph(np.random.default_rng(seed))
    inv = graph_invariants(G)
    c = B.topology_constants(inv, 5)
    for k in range(2, 6):
        assert B.bound_higher_explicit(inv, c, 0.0, p, 0.0, k) == pytest.approx(
            B.bound_laplacian_neumann(inv, k), rel=1e-12, abs=1e-12)


@given(st.integers(0, 2 ** 32 - 1), st.floats(0, 20), st.sampled_from([1.0, 2.0, INF]))
def test_monotone_in_k(seed, qn, p):
    G = random_admissible_graph(np.random.default_rng(seed))
    inv = graph_invariants(G)
    c = B.topology_constants(inv, 6)
    vals = [B.bound_higher_universal(inv, qn, p, k) for k in range(1, 7)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    mk = [c.M_k[k] for k in range(2, 7)]
    assert all(a < b for a, b in zip(mk, mk[1:]))


def test_check_soundness_flags_violation():
    rep = B.evaluate_all(interval(1.0, "inf"), None, 2, 2)
    assert B.check_soundness(rep, [PI2, 4 * PI2]) == []
    bad = B.check_soundness(rep, [PI2 * 1.01, 4 * PI2])
    assert {e.bound_id for e, _ in bad} >= {B.PRINCIPAL_UNIVERSAL_LONGEST, B.HIGHER_UNIVERSAL}
