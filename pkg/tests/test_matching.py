import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from graphlim.config import InfeasibleError
from graphlim.density import t
from graphlim.graph_core import Graph, complete, complete_bipartite, cycle, disjoint_union, hypercube, pair, path
from graphlim.polynomials.intpoly import IntPolynomial
from graphlim.polynomials.matching import (
    cover_walk_total,
    heilmann_lieb_check,
    matching_measure,
    matching_polynomial,
    matching_profile,
    matching_roots,
    matching_totals,
    matchpar_check,
    pm_limsup_bound,
    rho_moment_via_polynomial,
    rho_moment_via_walks,
    schrijver_check,
    treelike_total,
    treelike_walk_count,
)
from graphlim.spectral import catalan


def brute_matchings(G):
    counts = [0] * (G.n // 2 + 1)
    E = G.edges()
    for k in range(len(counts)):
        for S in itertools.combinations(E, k):
            if len({v for e in S for v in e}) == 2 * k:
                counts[k] += 1
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return counts


def hermite(n):
    # probabilists' Hermite: He_{k+1} = x He_k - k He_{k-1}
    a, b = IntPolynomial([1]), IntPolynomial([0, 1])
    if n == 0:
        return a
    for k in range(1, n):
        a, b = b, IntPolynomial([0, 1]) * b - IntPolynomial([k]) * a
    return b


@given(graphs(max_n=8))
def test_profile_matches_enumeration(G):
    assert list(matching_profile(G).m) == brute_matchings(G)


@given(graphs(min_n=2, max_n=8), st.data())
def test_edge_recursion(G, data):
    if not G.num_edges:
        return
    u, v = data.draw(st.sampled_from(G.edges()))
    rest = [w for w in range(G.n) if w not in (u, v)]
    lhs = matching_polynomial(G)
    rhs = matching_polynomial(G.remove_edge(u, v)) - matching_polynomial(G.induced(rest))
    assert lhs == rhs


@pytest.mark.parametrize("n", range(1, 9))
def test_complete_graph_is_hermite(n):
    assert matching_polynomial(complete(n)) == hermite(n)


def test_small_examples():
    assert matching_profile(path(4)).m == (1, 3, 1)
    assert matching_polynomial(path(4)) == IntPolynomial([1, 0, -3, 0, 1])
    assert matching_polynomial(complete(3)) == IntPolynomial([0, -3, 0, 1])
    assert matching_polynomial(Graph.empty(4)) == IntPolynomial.monomial(4)
    assert matching_totals(complete(3)) == (4, 0)
    assert matching_totals(cycle(4)) == (7, 2)
    assert matching_totals(complete(2)) == (2, 1)


@given(graphs(max_n=9), st.integers(0, 2))
def test_heilmann_lieb(G, slack):
    pr = pair(G, max(1, G.max_degree) + slack)
    assert heilmann_lieb_check(pr)
    if G.max_degree >= 2:
        assert max(abs(r) for r in matching_roots(G)) <= 2 * math.sqrt(G.max_degree - 1) + 1e-9


def test_measure_examples():
    rho = matching_measure(pair(complete(3), 2))
    assert np.allclose(sorted(rho.atoms), [-math.sqrt(1.5), 0, math.sqrt(1.5)])


@given(graphs(max_n=9))
def test_measure_is_symmetric_and_second_moment(G):
    pr = pair(G, max(2, G.max_degree))
    rho = matching_measure(pr)
    assert np.allclose(sorted(rho.atoms), sorted(-x for x in rho.atoms), atol=1e-9)
    assert abs(rho.moment(2) - float(t(complete(2), pr).exact)) < 1e-9


def test_treelike_examples():
    K3 = complete(3)
    assert treelike_total(K3, 4) == 18
    assert all(treelike_walk_count(K3, v, 2) == 2 for v in range(3))
    for d in (3, 4):
        Q = pair(hypercube(d), d)
        assert rho_moment_via_walks(Q, 2) == 1
        assert rho_moment_via_walks(Q, 4) == 2 - Fraction(1, d)


@given(graphs(max_n=7), st.sampled_from([2, 4, 6, 8]))
def test_walk_and_polynomial_routes_agree(G, k):
    pr = pair(G, max(2, G.max_degree))
    assert rho_moment_via_walks(pr, k) == rho_moment_via_polynomial(pr, k)


def test_walk_routes_on_girth_boundary():
    # length at least twice the girth is where cover and path-tree walks differ
    C4 = cycle(4)
    pr = pair(C4, 2)
    assert rho_moment_via_walks(pr, 8) == rho_moment_via_polynomial(pr, 8)
    assert cover_walk_total(C4, 8) != treelike_total(C4, 8)
    assert cover_walk_total(C4, 6) == treelike_total(C4, 6)


def test_hypercube_catalan_trend():
    Q = pair(hypercube(10), 10)
    assert abs(float(rho_moment_via_walks(Q, 6)) - catalan(3)) <= 27 / 10


def test_matchpar_examples():
    for pr in (pair(cycle(4), 2), pair(complete(2), 2), pair(disjoint_union([complete(2)] * 3), 2)):
        res = matchpar_check(pr)
        assert res.residual <= 1e-8
    M, Pm = matching_totals(disjoint_union([complete(2)] * 5))
    assert (M, Pm) == (32, 1)


@given(graphs(min_n=2, max_n=9))
def test_matchpar_identities(G):
    pr = pair(G, max(2, G.max_degree))
    assert matchpar_check(pr).residual <= 1e-8


def test_schrijver_and_semicircle_value():
    lhs, rhs = schrijver_check(pair(hypercube(4), 4))
    assert lhs >= rhs
    assert pm_limsup_bound(1.0) == pytest.approx(math.exp(-1))


def test_infeasible_profile():
    with pytest.raises(InfeasibleError):
        matching_profile(hypercube(7))
