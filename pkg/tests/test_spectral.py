import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from graphlim import spectral
from graphlim.config import InvariantViolation
from graphlim.density import hom_count, t
from graphlim.graph_core import (
    Graph,
    cartesian_sum,
    complete,
    complete_bipartite,
    cycle,
    hypercube,
    pair,
)
from graphlim.spectral import (
    DiscreteMeasure,
    SpectrumResult,
    adjacency_spectrum,
    catalan,
    cdf_distance,
    closed_walk_count,
    dirac_concentration_check,
    hypercube_spectrum,
    moment,
    moment_identity_value,
    semicircle_moment,
    sigma,
    sigma_bottom,
    sigma_sqrt,
    sigma_top,
    top_lower_edge_check,
)


def test_small_spectra():
    assert np.allclose(adjacency_spectrum(complete(3)).eigenvalues, [2, -1, -1])
    ev = adjacency_spectrum(complete_bipartite(3, 3)).eigenvalues
    assert np.allclose(ev, [3, 0, 0, 0, 0, -3], atol=1e-12)


@pytest.mark.parametrize("d", range(3, 9))
def test_hypercube_closed_form(d):
    ev = adjacency_spectrum(hypercube(d)).eigenvalues
    assert np.allclose(ev, hypercube_spectrum(d), atol=1e-8)


def test_methods_agree():
    G = hypercube(6)
    a = adjacency_spectrum(G, method="inrepo").eigenvalues
    b = adjacency_spectrum(G, method="lapack").eigenvalues
    assert np.allclose(a, b, atol=1e-10)


@given(graphs(max_n=5), graphs(max_n=4))
def test_kronecker_sum_oracle(G, H):
    eg = adjacency_spectrum(G).eigenvalues
    eh = adjacency_spectrum(H).eigenvalues
    sums = sorted((a + b for a in eg for b in eh), reverse=True)
    assert np.allclose(adjacency_spectrum(cartesian_sum(G, H)).eigenvalues, sums, atol=1e-8)


@given(graphs(max_n=10), st.integers(1, 8), st.integers(0, 2))
def test_moment_identity(G, k, slack):
    pr = pair(G, max(1, G.max_degree) + slack)
    A = [[int(x) for x in row] for row in G.adjacency_matrix()]
    # exact trace of A^k with python integers
    P = [[int(i == j) for j in range(G.n)] for i in range(G.n)]
    for _ in range(k):
        P = [[sum(P[i][m] * A[m][j] for m in range(G.n)) for j in range(G.n)] for i in range(G.n)]
    tr = sum(P[i][i] for i in range(G.n))
    assert closed_walk_count(G, k) == tr
    assert abs(moment(sigma(pr), k) - float(moment_identity_value(pr, k))) <= 1e-9
    if k >= 3:
        assert tr == hom_count(cycle(k), G)


def test_sigma_examples():
    s = sigma(pair(complete(3), 2))
    assert np.allclose(s.atoms, [-0.5, -0.5, 1.0]) and np.allclose(s.weights, [1 / 3] * 3)
    assert abs(moment(s, 3) - 0.25) < 1e-12
    Q4 = pair(hypercube(4), 4)
    assert abs(moment(sigma(Q4), 2) - float(t(complete(2), Q4).exact) / 4) < 1e-12
    edgeless = sigma(pair(Graph.empty(4), 1))
    assert edgeless.atoms == (0.0,) * 4
    assert moment(s, 0) == 1.0


@given(graphs(max_n=9))
def test_first_moment_vanishes(G):
    assert abs(moment(sigma(pair(G)), 1)) <= 1e-10


def test_top_bottom_measures():
    K44 = pair(complete_bipartite(4, 4), 4)
    top = sigma_top(K44, 2)
    assert np.allclose(sorted(top.atoms), [0, 1], atol=1e-12)
    assert sigma_top(pair(complete(3), 2), 1).atoms == pytest.approx((1.0,))
    G = pair(cycle(7), 2)
    full = sigma(G)
    assert np.allclose(sigma_top(G, 7).atoms, full.atoms) and np.allclose(sigma_bottom(G, 7).atoms, full.atoms)


@given(graphs(min_n=2, max_n=9), st.data())
def test_top_lower_edge(G, data):
    r = data.draw(st.integers(1, G.n))
    assert top_lower_edge_check(pair(G), r)


def test_sigma_sqrt_hypercube_is_binomial():
    for d in (6, 8):
        atoms = sorted(sigma_sqrt(pair(hypercube(d), d)).atoms)
        exact = sorted((d - 2 * i) / math.sqrt(d) for i in range(d + 1) for _ in range(math.comb(d, i)))
        assert np.allclose(atoms, exact, atol=1e-9)


def test_sigma_sqrt_moments_count_walks():
    pr = pair(complete(4), 3)
    for k in (3, 4):
        expected = hom_count(cycle(k), complete(4)) / (4 * 3 ** (k / 2))
        assert abs(moment(sigma_sqrt(pr), k) - expected) < 1e-9


def test_dirac_bound_examples():
    assert dirac_concentration_check(pair(hypercube(8), 8), 0.5)
    assert dirac_concentration_check(pair(complete(11), 10), 0.9)
    assert dirac_concentration_check(pair(cycle(6), 2), 1.0)


@given(graphs(max_n=10), st.sampled_from([0.25, 0.5, 1.0]), st.integers(0, 3))
def test_dirac_bound_always_holds(G, eps, slack):
    assert dirac_concentration_check(pair(G, max(1, G.max_degree) + slack), eps)


def test_semicircle_moments():
    assert [semicircle_moment(k) for k in (2, 4, 6)] == [1, 2, 5]
    assert semicircle_moment(5) == 0
    assert catalan(3) == 5
    assert semicircle_moment(4, 0.5) == 0.5


def test_cdf_distances():
    a = DiscreteMeasure.uniform([0.0])
    b = DiscreteMeasure.uniform([1.0])
    assert cdf_distance(a, a) == 0 and cdf_distance(a, b) == 1
    c = DiscreteMeasure.uniform([0.0, 1.0])
    assert cdf_distance(a, c) == 0.5
    g = spectral.gaussian_cdf_distance(sigma_sqrt(pair(hypercube(10), 10)))
    assert 0 < g < 0.2


def test_measure_validation():
    with pytest.raises(ValueError):
        DiscreteMeasure((1.0, 0.0), (0.5, 0.5))
    with pytest.raises(ValueError):
        DiscreteMeasure((0.0,), (1.5,))


def test_check_spectrum_detects_bad_values():
    pr = pair(cycle(4), 2)
    with pytest.raises(InvariantViolation):
        spectral.check_spectrum(pr, SpectrumResult((3.0, -1.0, -1.0, -1.0)))
    spectral.check_spectrum(pr, adjacency_spectrum(pr.graph))


def test_csv_header():
    text = sigma(pair(complete(3), 2, "K3")).to_csv()
    assert text.startswith("# kind=sigma\n") and "atom,weight" in text
