import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from graphlim.config import CapExceeded, InadmissibleError, InvariantViolation
from graphlim.canon import is_isomorphic
from graphlim.corpus import kdd_union
from graphlim.density import (
    convergence_table,
    enumerate_quotients,
    essential_girth_profile,
    alpha_regularity_report,
    hom_count,
    hom_count_backtrack,
    hom_vs_inj_gap,
    inj_count,
    parse_pattern,
    product_density_check,
    rooted_hom_count,
    t,
    t_inj,
    t_rooted,
)
from graphlim.graph_core import (
    AdmissiblePair,
    Graph,
    RandomSource,
    complete,
    complete_bipartite,
    cycle,
    disjoint_union,
    grid,
    hypercube,
    pair,
    path,
    projective_incidence,
    random_graph,
    random_tree,
)


def brute_hom(F, G, injective=False):
    count = 0
    for phi in itertools.product(range(G.n), repeat=F.n):
        if injective and len(set(phi)) < F.n:
            continue
        if all(G.has_edge(phi[u], phi[v]) for u, v in F.edges()):
            count += 1
    return count


def test_known_counts():
    assert hom_count(complete(3), complete(4)) == 24
    assert hom_count(cycle(4), complete_bipartite(3, 3)) == 162
    assert inj_count(complete(3), complete(4)) == 24
    assert inj_count(path(3), path(3)) == 2
    assert rooted_hom_count(path(3), 1, cycle(4), 0) == 4
    assert sum(rooted_hom_count(cycle(3), 0, cycle(5), p) for p in range(5)) == 0


@given(graphs(max_n=4), graphs(max_n=5))
def test_hom_matches_brute_force(F, G):
    assert hom_count(F, G) == brute_hom(F, G)
    assert hom_count_backtrack(F, G) == brute_hom(F, G)


@given(graphs(max_n=4), graphs(max_n=5))
def test_inj_matches_brute_force(F, G):
    assert inj_count(F, G) == brute_hom(F, G, injective=True)


@given(st.integers(1, 7), st.integers(0, 10**6), graphs(max_n=9))
def test_forest_fast_path_agrees_with_backtracking(n, seed, G):
    T = random_tree(n, RandomSource(seed))
    assert hom_count(T, G) == hom_count_backtrack(T, G)


@given(graphs(max_n=8))
def test_k2_counts_twice_edges(G):
    assert hom_count(complete(2), G) == 2 * G.num_edges
    assert inj_count(complete(2), G) == 2 * G.num_edges


@given(graphs(max_n=5), graphs(max_n=6))
def test_quotient_identity(F, G):
    assert hom_count(F, G) == sum(q.multiplicity * inj_count(q.graph, G) for q in enumerate_quotients(F))


def test_quotients_of_small_patterns():
    assert [q.graph.n for q in enumerate_quotients(complete(2))] == [2]
    qs = enumerate_quotients(path(3))
    assert sorted(q.graph.n for q in qs) == [2, 3]
    P4, K4 = path(4), complete(4)
    assert hom_count(P4, K4) == sum(q.multiplicity * inj_count(q.graph, K4) for q in enumerate_quotients(P4))


def test_quotient_cap():
    with pytest.raises(CapExceeded):
        enumerate_quotients(path(8))


def test_densities_examples():
    K4 = pair(complete(4), 3)
    assert t(complete(3), K4).exact == Fraction(2, 3)
    assert t_inj(complete(3), K4).exact == 1
    assert t(cycle(4), pair(complete_bipartite(3, 3), 3)).exact == 1
    assert t(Graph.empty(1), K4).exact == 1 and t_inj(Graph.empty(1), K4).exact == 1
    G = random_graph(9, 0.4, RandomSource(2))
    pr = pair(G, G.max_degree + 1)
    assert t(complete(2), pr).exact == Fraction(2 * G.num_edges, G.n * pr.d)
    assert t_inj(complete(2), pr).exact == t(complete(2), pr).exact


def test_density_text_form():
    v = t(complete(3), pair(complete(4), 3))
    assert v.as_text() == "2/3" and abs(v.value - 2 / 3) < 1e-15


def test_t_inj_needs_d_above_one():
    pr = pair(complete(2), 1)
    assert t_inj(complete(2), pr).exact == 1
    with pytest.raises(InadmissibleError):
        t_inj(path(3), pr)


def test_rooted_examples():
    C4 = pair(cycle(4), 2)
    assert all(t_rooted(path(3), 0, C4, p) == 1 for p in range(4))
    Q3 = pair(hypercube(3), 3)
    assert all(t_rooted(complete(2), 0, Q3, p) == 1 for p in range(8))


@given(graphs(max_n=7, connected=True), st.integers(0, 6))
def test_rooted_mean_is_density(G, o):
    F = path(3)
    o = o % F.n
    pr = pair(G)
    mean = sum(t_rooted(F, o, pr, p) for p in range(G.n)) / G.n
    assert mean == t(F, pr).exact


def _prop_case(F, G, d):
    if F.num_edges == 0:
        return True
    if F.is_forest() and G.is_regular(d):
        return True
    if F.is_bipartite() and G.n > 0 and G.is_regular(d):
        # G must be a disjoint union of K_{d,d}
        return all(is_isomorphic(G.induced(c), complete_bipartite(d, d)) for c in G.components)
    return False


@given(graphs(max_n=5), graphs(max_n=7), st.integers(0, 2))
def test_t_equals_one_characterisation(F, G, slack):
    d = max(1, G.max_degree) + slack
    assert (t(F, pair(G, d)).exact == 1) == _prop_case(F, G, d)


def test_kdd_unions_give_one_for_bipartite_patterns():
    G = kdd_union(3, 2)
    for name in ("C4", "C6", "K2,3", "P5"):
        assert t(parse_pattern(name), pair(G, 3)).exact == 1
    assert t(cycle(4), pair(hypercube(3), 3)).exact < 1


@given(graphs(min_n=2, max_n=5, connected=True), graphs(max_n=8), st.data())
def test_monotone_under_connected_subpatterns(F, G, data):
    # deleting a non-bridge edge or a leaf keeps the subpattern connected
    pr = pair(G, max(2, G.max_degree))
    edges = F.edges()
    e = data.draw(st.sampled_from(edges)) if edges else None
    if e is None:
        return
    H = F.remove_edge(*e)
    if not H.is_connected():
        leaves = [v for v in range(F.n) if F.degrees[v] == 1]
        if not leaves:
            return
        H = F.induced([v for v in range(F.n) if v != leaves[0]])
    assert t(F, pr).exact <= t(H, pr).exact
    assert t_inj(F, pr).exact <= t_inj(H, pr).exact


def test_parse_pattern():
    assert parse_pattern("C5") == cycle(5)
    assert parse_pattern("K3,4") == complete_bipartite(3, 4)
    assert parse_pattern("P1").n == 1
    for bad in ("", "X3", "C2", "K"):
        with pytest.raises(ValueError):
            parse_pattern(bad)
    with pytest.raises(CapExceeded):
        hom_count(parse_pattern("P11"), cycle(4))


def test_hom_vs_inj_gap_decays():
    for d in range(6, 11):
        gap = hom_vs_inj_gap(path(3), pair(hypercube(d), d))
        assert 0 <= gap <= Fraction(2, d)
    assert hom_vs_inj_gap(complete(2), pair(cycle(5), 2)) == 0


def test_product_density():
    K3 = pair(complete(3), 2)
    lhs, rhs = product_density_check(cycle(3), [K3, K3])
    assert lhs == rhs
    K2 = pair(complete(2), 1)
    assert product_density_check(complete(2), [K2, K2]) == (1, 1)
    assert hom_count(cycle(3), complete(3)) ** 2 == lhs * 9 * 16


def test_alpha_report_on_grid():
    n = 5
    rows = alpha_regularity_report([AdmissiblePair(grid(2, n), 4, "grid")])
    assert rows[0]["t_K2"] == Fraction(n - 1, n)
    reg = alpha_regularity_report([pair(hypercube(d), d) for d in (4, 5)])
    assert all(r["t_K2"] == 1 and r["t_P3"] == 1 for r in reg)


def test_essential_girth_examples():
    prof = essential_girth_profile([projective_incidence(q) for q in (2, 3)], 6)
    assert prof["ks"] == [3, 4, 5, 6]
    assert all(v == 0 for row in prof["values"] for v in row[:3])
    kdd = [pair(complete_bipartite(d, d), d) for d in (3, 4)]
    for pr in kdd:
        d = pr.d
        assert inj_count(cycle(4), pr.graph) == 2 * d * d * (d - 1) ** 2
    assert all(row[1] > Fraction(1, 4) for row in essential_girth_profile(kdd, 4)["values"])
    trees = [pair(path(n)) for n in (5, 6)]
    assert all(v == 0 for row in essential_girth_profile(trees, 5)["values"] for v in row)


def test_component_product_bound():
    # product of the parts dominates the two-component pattern, up to merged quotients
    F = disjoint_union([complete(2), path(3)])
    C = 8  # empirical constant for the second-order term
    for d in (4, 5, 6, 7):
        pr = pair(hypercube(d), d)
        v = pr.graph.n
        diff = t_inj(complete(2), pr).exact * t_inj(path(3), pr).exact - t_inj(F, pr).exact
        merged = sum(q.multiplicity * t_inj(q.graph, pr).exact for q in enumerate_quotients(F, "one_merge"))
        assert 0 <= diff <= merged / v + Fraction(C, v * v)


def test_convergence_table_serialisation():
    seq = [pair(hypercube(d), d, f"Q{d}") for d in (3, 4)]
    tab = convergence_table(seq, ["K2", "C4"], meta={"seed": 1})
    csv_text = tab.to_csv()
    assert csv_text.splitlines()[0] == "# seed=1"
    assert "C4_exact" in csv_text and "9/16" not in csv_text.splitlines()[0]
    assert '"kind": "t"' in tab.to_json()
    assert tab.to_csv() == convergence_table(seq, ["K2", "C4"], meta={"seed": 1}).to_csv()
