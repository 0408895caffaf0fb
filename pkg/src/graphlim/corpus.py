"""Graph collections used by the checks: exhaustive small graphs and seeded random mixes."""

from __future__ import annotations

from .canon import canonical_key
from .graph_core import (
    AdmissiblePair,
    Graph,
    RandomSource,
    complete,
    complete_bipartite,
    configuration_model,
    cycle,
    disjoint_union,
    hypercube,
    random_graph,
    random_relabel,
    random_tree,
)


def all_graphs(n: int) -> list[Graph]:
    """Every graph on n vertices up to isomorphism, by adding one edge at a time."""
    if n == 0:
        return [Graph.empty(0)]
    level = {canonical_key(Graph.empty(n)): Graph.empty(n)}
    out = list(level.values())
    while level:
        nxt: dict[bytes, Graph] = {}
        for G in level.values():
            present = set(G.edges())
            for u in range(n):
                for v in range(u + 1, n):
                    if (u, v) in present:
                        continue
                    H = Graph.from_edges(n, list(present) + [(u, v)])
                    k = canonical_key(H)
                    if k not in nxt:
                        nxt[k] = H
        level = {k: nxt[k] for k in sorted(nxt)}
        out += level.values()
    return out


def all_graphs_upto(n: int, start: int = 1) -> list[Graph]:
    return [G for k in range(start, n + 1) for G in all_graphs(k)]


def random_regular(n: int, d: int, rng: RandomSource, tries: int = 200) -> Graph | None:
    """A simple d-regular graph from the configuration model by rejection, or None."""
    if (n * d) % 2 or d >= n:
        return None
    for _ in range(tries):
        _, G = configuration_model(n, d, rng)
        if G.is_regular(d):
            return G
    return None


def kdd_union(d: int, copies: int) -> Graph:
    return disjoint_union([complete_bipartite(d, d)] * copies)


def random_corpus(rng: RandomSource, count: int = 200, max_n: int = 12) -> list[Graph]:
    """Seeded mix of G(n, p), regular graphs, K_{d,d} unions, trees and cycles (all relabelled)."""
    gen = rng.gen
    out: list[Graph] = []
    kinds = ["gnp", "regular", "kdd", "tree", "cycle_union", "gnp"]
    i = 0
    while len(out) < count:
        kind = kinds[i % len(kinds)]
        i += 1
        n = int(gen.integers(2, max_n + 1))
        if kind == "gnp":
            G = random_graph(n, float(gen.uniform(0.1, 0.9)), rng)
        elif kind == "regular":
            d = int(gen.integers(1, min(n, 6)))
            G = random_regular(n, d, rng)
            if G is None:
                continue
        elif kind == "kdd":
            d = int(gen.integers(1, 4))
            copies = int(gen.integers(1, max(2, max_n // (2 * d)) + 1))
            if 2 * d * copies > max_n:
                continue
            G = kdd_union(d, copies)
        elif kind == "tree":
            G = random_tree(n, rng)
        else:
            if n < 3:
                continue
            a = int(gen.integers(3, n + 1))
            parts = [cycle(a)] + ([cycle(n - a)] if n - a >= 3 else [Graph.empty(n - a)] if n > a else [])
            G = disjoint_union(parts)
        out.append(random_relabel(G, rng))
    return out


def spectral_corpus(rng: RandomSource, count: int = 100, max_n: int = 64) -> list[AdmissiblePair]:
    """Admissible pairs with at most max_n vertices: random, regular and structured graphs."""
    gen = rng.gen
    fixed = [
        ("K4", complete(4)),
        ("C9", cycle(9)),
        ("Q3", hypercube(3)),
        ("Q6", hypercube(6)),
        ("K8,8", complete_bipartite(8, 8)),
        ("K3,3+K3,3", kdd_union(3, 2)),
    ]
    out = [AdmissiblePair(G, max(1, G.max_degree), name) for name, G in fixed]
    i = 0
    while len(out) < count:
        n = int(gen.integers(4, max_n + 1))
        if i % 2:
            d = int(gen.integers(2, min(n, 10)))
            G = random_regular(n, d, rng)
            name = f"reg{n}_{d}_{i}"
            if G is None:
                i += 1
                continue
        else:
            G = random_graph(n, float(gen.uniform(0.05, 0.5)), rng)
            name = f"gnp{n}_{i}"
        slack = int(gen.integers(0, 3))
        out.append(AdmissiblePair(G, max(1, G.max_degree) + slack, name))
        i += 1
    return out
