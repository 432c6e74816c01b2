import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qgspec.graph import interval, path, star
from qgspec.potential import (Potential, PotentialError, eval_potential, integrate_potential,
                              lp_norm_positive_part, q_positive_vanishes, simpson)

G1 = interval(1.0)


def test_eval_examples():
    G = star([1.0, 2.0])
    assert eval_potential(Potential.constant(G, 5.0), 1, 1.3) == 5.0
    assert eval_potential(Potential.poly(G1, [[0.0, 1.0]]), 0, 0.25) == pytest.approx(0.25)
    assert eval_potential(Potential.samples(G1, [[0.0, 1.0, 0.0]]), 0, 0.25) == pytest.approx(0.5)


def test_eval_out_of_range():
    with pytest.raises(PotentialError):
        eval_potential(Potential.zero(G1), 0, 1.5)


def test_invalid_potentials():
    with pytest.raises(PotentialError):
        Potential.samples(G1, [[1.0]])
    with pytest.raises(PotentialError):
        Potential.constant(G1, math.nan)
    with pytest.raises(PotentialError):
        Potential("spline", (1.0,), (0.0,))


def test_norm_examples():
    G = path([1.0, 1.5])
    c = 3.0
    q = Potential.constant(G, c)
    for p in (1, 2, 3.5):
        assert lp_norm_positive_part(q, p) == pytest.approx(c * 2.5 ** (1 / p), rel=1e-12)
    assert lp_norm_positive_part(q, math.inf) == c
    neg = Potential.constant(G, -1.0)
    for p in (1, 2, "inf"):
        assert lp_norm_positive_part(neg, p) == 0.0
    x = Potential.poly(G1, [[0.0, 1.0]])
    assert lp_norm_positive_part(x, 2) == pytest.approx(1 / math.sqrt(3), rel=1e-9)


def test_p_below_one():
    with pytest.raises(PotentialError):
        lp_norm_positive_part(Potential.zero(G1), 0.5)


def test_integral_examples():
    assert integrate_potential(Potential.constant(path([1.0, 1.0]), -1.0)) == pytest.approx(-2.0)
    assert integrate_potential(Potential.poly(G1, [[0.0, 1.0]])) == pytest.approx(0.5)
    assert integrate_potential(Potential.samples(G1, [[0.0, 1.0, 0.0]])) == pytest.approx(0.5)


def test_positive_part_with_sign_change():
    # q = x - 1/2 on [0, 1]: int q_+ = 1/8, ||q_+||_2^2 = 1/24, sup = 1/2
    q = Potential.poly(G1, [[-0.5, 1.0]])
    assert lp_norm_positive_part(q, 1) == pytest.approx(1 / 8, rel=1e-9)
    assert lp_norm_positive_part(q, 2) == pytest.approx(math.sqrt(1 / 24), rel=1e-9)
    assert lp_norm_positive_part(q, math.inf) == pytest.approx(0.5)
    assert not q_positive_vanishes(q)


def test_poly_sup_interior_maximum():
    # q = x (1 - x) peaks at 1/4 in the middle of the edge
    q = Potential.poly(G1, [[0.0, 1.0, -1.0]])
    assert lp_norm_positive_part(q, math.inf) == pytest.approx(0.25, rel=1e-12)


def test_simpson_smooth():
    val, _ = simpson(np.sin, 0.0, math.pi)
    assert val == pytest.approx(2.0, rel=1e-9)


coeffs = st.lists(st.floats(-5, 5), min_size=1, max_size=4)


@given(coeffs, st.floats(0, 3))
def test_norm_monotone_under_increase(c, shift):
    q = Potential.poly(G1, [c])
    r = Potential.poly(G1, [[c[0] + shift] + c[1:]])
    for p in (1, 2, math.inf):
        assert lp_norm_positive_part(r, p) >= lp_norm_positive_part(q, p) - 1e-10


@given(coeffs)
def test_l1_dominates_signed_integral(c):
    q = Potential.poly(G1, [c])
    assert lp_norm_positive_part(q, 1) >= integrate_potential(q) - 1e-10


@given(st.lists(st.floats(0, 10), min_size=2, max_size=2), st.floats(1, 8))
def test_holder_consistency_constant(vals, p):
    G = path([1.0, 0.7])
    q = Potential.constant(G, vals)
    c = max(vals)
    if vals[0] != vals[1]:
        return
    L = G.total_length
    assert lp_norm_positive_part(q, p) * L ** (1 - 1 / p) == pytest.approx(
        lp_norm_positive_part(q, 1), rel=1e-10, abs=1e-12)
    assert lp_norm_positive_part(q, math.inf) == c


@given(st.floats(0, 10), st.floats(1, 8))
def test_holder_consistency_uniform(c, p):
    G = path([1.0, 0.7, 2.2])
    q = Potential.constant(G, c)
    L = G.total_length
    assert lp_norm_positive_part(q, p) * L ** (1 - 1 / p) == pytest.approx(
        lp_norm_positive_part(q, 1), rel=1e-10, abs=1e-12)
