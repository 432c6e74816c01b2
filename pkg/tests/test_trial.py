import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgspec import bounds as B
from qgspec.graph import build_graph, cycle, graph_invariants, interval, path, star
from qgspec.mesh import Mesh
from qgspec.potential import Potential
from qgspec.random_graphs import random_admissible_graph, random_nonneg_potential
from qgspec.solver import initial_mesh, rayleigh_quotient, solve_spectrum
from qgspec.trial import (TrialFamily, TrialRankError, combined_trial, dirichlet_sine_family,
                          dirichlet_sine_longest, explicit_trial_family, neumann_mode,
                          neumann_modes, trial_space_extremes, verify_variational_chain)

PI2 = math.pi ** 2


def _fine(G):
    return initial_mesh(G).refined().refined()


def test_sine_longest_interval():
    G = interval(1.0)
    f = dirichlet_sine_longest(G, Mesh(G, (512,)))
    assert f.l2_norm() == pytest.approx(1.0, rel=1e-12)
    # discrete L2 normalisation rescales the samples by 1 + O(h^2)
    assert f.sup_norm() == pytest.approx(math.sqrt(2), rel=1e-3)
    assert f.derivative_l2_norm() ** 2 == pytest.approx(PI2, rel=1e-4)


def test_sine_longest_support():
    G = star([1.0] * 3)
    f = dirichlet_sine_longest(G)
    assert np.any(f.values[0] != 0) and not np.any(f.values[1]) and not np.any(f.values[2])
    assert f.vertex_sup_norm() == 0.0
    G2 = path([2.0, 1.0])
    g = dirichlet_sine_longest(G2)
    assert not np.any(g.values[1]) and g.sup_norm() == pytest.approx(1.0, rel=1e-4)


def test_sine_family_interval():
    G = interval(1.0)
    mesh = Mesh(G, (512,))
    fam = dirichlet_sine_family(G, 3, mesh)
    x = mesh.nodes(0)
    for j, f in enumerate(fam.members, start=1):
        ref = math.sqrt(2) * np.sin(j * math.pi * x)
        ref[-1] = 0.0
        np.testing.assert_allclose(f.values[0], ref, atol=1e-3)


def test_sine_family_tie_break_and_gram():
    G = path([1.0, 0.5])
    fam = dirichlet_sine_family(G, 3, _fine(G))
    assert fam.labels == [(0, 1), (0, 2), (1, 1)]
    np.testing.assert_allclose(fam.gram, np.eye(3), atol=1e-8)


def test_neumann_ground_state_constant():
    G = star([1.0, 0.6, 1.4])
    fN = neumann_mode(G, 1, _fine(G))
    L = G.total_length
    for v in fN.values:
        np.testing.assert_allclose(v, 1 / math.sqrt(L), rtol=1e-6)
    assert fN.inner(dirichlet_sine_longest(G, fN.mesh)) > 0


def test_neumann_second_interval_mode_sign():
    G = interval(1.0)
    mesh = _fine(G)
    fN = neumann_mode(G, 2, mesh)
    x = mesh.nodes(0)
    ref = math.sqrt(2) * np.cos(math.pi * x)
    s = np.sign(fN.values[0][0])
    np.testing.assert_allclose(s * fN.values[0], ref, atol=1e-3)
    fD2 = dirichlet_sine_family(G, 2, mesh).members[1]
    assert fN.inner(fD2) >= -1e-12


def test_neumann_energy_below_topology_constant():
    rng = np.random.default_rng(5)
    for _ in range(5):
        G = random_admissible_graph(rng)
        inv = graph_invariants(G)
        k = 4
        c = B.topology_constants(inv, k)
        modes = neumann_modes(G, k, _fine(G))
        for f in modes[1:]:
            # discrete modes carry O(h^2) excess energy
            assert f.derivative_l2_norm() ** 2 <= c.M_k[k] ** 2 / inv.total_length * (1 + 1e-3)


def test_combined_trial():
    G = star([1.0, 0.5, 0.8])
    mesh = _fine(G)
    fD = dirichlet_sine_longest(G, mesh)
    fN = neumann_mode(G, 1, mesh, fD)
    f0 = combined_trial(0.0, fD, fN)
    np.testing.assert_allclose(np.concatenate(f0.values), np.concatenate(fN.values))
    for a in (0.5, 2.0, 7.0):
        f = combined_trial(a, fD, fN)
        assert f.l2_norm() ** 2 >= a * a + 1 - 1e-10
        Ga = G.with_couplings([a / 4] * 4)
        lam1 = solve_spectrum(Ga, None, 1).eigenvalues[0]
        assert rayleigh_quotient(Ga, None, f) >= lam1 - 1e-6


def test_combined_trial_resamples_to_finer():
    G = interval(1.0)
    fD = dirichlet_sine_longest(G, Mesh(G, (8,)))
    fN = neumann_mode(G, 1, Mesh(G, (32,)))
    assert combined_trial(1.0, fD, fN).mesh.intervals == (32,)


def test_rank_deficient_family_raises():
    G = interval(1.0)
    f = dirichlet_sine_longest(G)
    with pytest.raises(TrialRankError):
        trial_space_extremes(G, Potential.zero(G), TrialFamily([f, f * 2.0]))


def test_explicit_family_full_rank():
    for G in (star([1.0] * 3), path([1.0, 0.3, 0.7]),
              build_graph(2, [(0, 1, 1.0), (0, 1, 1.0), (0, 1, 1.0)])):
        for a in (0.0, 0.5, 1.0, 2.0, 10.0):
            fam = explicit_trial_family(G, 4, a, _fine(G))
            assert fam.smallest_singular_value() > 1e-6


def test_chain_interval_dirichlet():
    rep = verify_variational_chain(interval(1.0, "inf"), None, p=2, k=1)
    assert rep.ok
    s = rep.steps[0]
    assert s.eigenvalue == pytest.approx(PI2, rel=1e-5)
    assert s.trial_max == pytest.approx(PI2, rel=1e-5)
    assert s.bound == pytest.approx(PI2)


def test_chain_path_kirchhoff():
    rep = verify_variational_chain(path([1.0, 1.0]), None, p=2, k=1)
    assert rep.ok
    ex = [s for s in rep.steps if s.kind == "explicit"][0]
    assert abs(ex.eigenvalue) < 1e-9 and abs(ex.trial_max) < 1e-9 and abs(ex.bound) < 1e-12


def test_chain_random_four_edges():
    rng = np.random.default_rng(11)
    while True:
        G = random_admissible_graph(rng, max_edges=4)
        if G.n_edges == 4:
            break
    rep = verify_variational_chain(G, random_nonneg_potential(rng, G), p=2, k=3)
    assert rep.ok and len(rep.steps) == 6
    assert all(rep.checks.values())


def test_chain_cycle_skips_explicit():
    rep = verify_variational_chain(cycle([1.0, 0.7], 1.0), None, k=2)
    assert rep.ok
    assert all(s.kind == "universal" for s in rep.steps)
    assert any("cycle" in n for n in rep.notes)


@settings(max_examples=10)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([0.0, 0.5, 1.0, 3.0]))
def test_every_trial_is_above_lambda1(seed, a):
    rng = np.random.default_rng(seed)
    G = random_admissible_graph(rng)
    q = random_nonneg_potential(rng, G)
    res = solve_spectrum(G, q, 1, tol=1e-6)
    fam = explicit_trial_family(G, 3, a, res.mesh)
    for f in fam.members:
        assert rayleigh_quotient(G, q, f) >= res.eigenvalues[0] - res.error_estimates[0] - 1e-9
