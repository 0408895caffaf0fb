"""Finite simple graphs, admissible pairs and the graph families used throughout.

Vertices are ``0..n-1``; adjacency is stored as sorted neighbour tuples plus
integer bitmasks (``masks[v]`` has bit ``u`` set iff ``u ~ v``), which the
counting routines use for fast neighbourhood intersection.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .config import CapExceeded, InadmissibleError, caps


def _check_size(n: int, what: str = "graph") -> None:
    if n > caps().max_vertices:
        raise CapExceeded(f"{what} would have {n} vertices (cap {caps().max_vertices})")


@dataclass(frozen=True, eq=True)
class Graph:
    n: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match n")
        for v, nb in enumerate(self.adj):
            prev = -1
            for u in nb:
                if u <= prev:
                    raise ValueError(f"neighbours of {v} not strictly sorted")
                if u == v:
                    raise ValueError(f"loop at {v}")
                if not 0 <= u < self.n:
                    raise ValueError(f"neighbour {u} of {v} out of range")
                prev = u
        for v, nb in enumerate(self.adj):
            for u in nb:
                if v not in self._nbsets[u]:
                    raise ValueError(f"asymmetric adjacency {v}->{u}")

    @cached_property
    def _nbsets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(nb) for nb in self.adj)

    @classmethod
    def _trusted(cls, n: int, adj: tuple[tuple[int, ...], ...]) -> "Graph":
        # skips validation; callers guarantee sorted, symmetric, loopless adjacency
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "adj", adj)
        return obj

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a simple graph; duplicate edges collapse, loops are rejected."""
        nbs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            nbs[u].add(v)
            nbs[v].add(u)
        return cls._trusted(n, tuple(tuple(sorted(s)) for s in nbs))

    @classmethod
    def empty(cls, n: int = 0) -> "Graph":
        return cls(n, tuple(() for _ in range(n)))

    # -- basic invariants -------------------------------------------------
    @cached_property
    def masks(self) -> tuple[int, ...]:
        out = []
        for nb in self.adj:
            m = 0
            for u in nb:
                m |= 1 << u
            out.append(m)
        return tuple(out)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nb) for nb in self.adj)

    @property
    def num_edges(self) -> int:
        return sum(self.degrees) // 2

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.adj) for v in nb if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbsets[u]

    def is_regular(self, d: int | None = None) -> bool:
        if self.n == 0:
            return True
        k = self.degrees[0] if d is None else d
        return all(x == k for x in self.degrees)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for u in self.adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        comp.append(u)
                        queue.append(u)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @property
    def num_components(self) -> int:
        return len(self.components)

    def is_connected(self) -> bool:
        return self.n > 0 and self.num_components == 1

    def is_forest(self) -> bool:
        return self.num_edges == self.n - self.num_components

    def bipartition(self) -> list[int] | None:
        """Two-colouring as a list of 0/1, or ``None`` if an odd cycle exists."""
        colour = [-1] * self.n
        for s in range(self.n):
            if colour[s] >= 0:
                continue
            colour[s] = 0
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for u in self.adj[v]:
                    if colour[u] < 0:
                        colour[u] = 1 - colour[v]
                        queue.append(u)
                    elif colour[u] == colour[v]:
                        return None
        return colour

    @cached_property
    def _bipartite(self) -> bool:
        return self.bipartition() is not None

    def is_bipartite(self) -> bool:
        return self._bipartite

    # -- derived graphs ----------------------------------------------------
    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        return Graph.from_edges(
            len(vertices),
            ((index[u], index[v]) for u, v in self.edges() if u in index and v in index),
        )

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def remove_edge(self, u: int, v: int) -> "Graph":
        return Graph.from_edges(self.n, (e for e in self.edges() if e != (min(u, v), max(u, v))))

    def adjacency_matrix(self, dtype=np.int64) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=dtype)
        for u, v in self.edges():
            A[u, v] = A[v, u] = 1
        return A

    # -- serialisation -----------------------------------------------------
    def to_edgelist(self) -> str:
        lines = [f"{self.n} {self.num_edges}"]
        lines += [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        n, m = int(rows[0][0]), int(rows[0][1])
        if len(rows) - 1 != m:
            raise ValueError(f"header announces {m} edges, found {len(rows) - 1}")
        return cls.from_edges(n, ((int(a), int(b)) for a, b in rows[1:]))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


@dataclass(frozen=True)
class MultiGraph:
    """Edge multiset on ``0..n-1``; a loop at ``v`` adds 2 to ``deg(v)``."""

    n: int
    edges: tuple[tuple[int, int], ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    @property
    def num_loops(self) -> int:
        return sum(1 for u, v in self.edges if u == v)

    def simplify(self) -> Graph:
        return Graph.from_edges(self.n, ((u, v) for u, v in self.edges if u != v))


@dataclass(frozen=True)
class AdmissiblePair:
    graph: Graph
    d: int | Fraction
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.d < 1:
            raise InadmissibleError(f"degree bound must be >= 1, got {self.d}")
        if self.graph.max_degree > self.d:
            raise InadmissibleError(
                f"max degree {self.graph.max_degree} exceeds degree bound {self.d}"
            )

    @property
    def n(self) -> int:
        return self.graph.n


def pair(graph: Graph, d=None, name: str = "") -> AdmissiblePair:
    """Admissible pair with ``d`` defaulting to ``max(1, max degree)``."""
    if d is None:
        d = max(1, graph.max_degree)
    elif isinstance(d, float):
        d = Fraction(d)
    return AdmissiblePair(graph, d, name)


# -- named graphs --------------------------------------------------------------
def complete(k: int) -> Graph:
    if k < 1:
        raise ValueError("complete graph needs k >= 1")
    return Graph.from_edges(k, itertools.combinations(range(k), 2))


def cycle(k: int) -> Graph:
    if k < 3:
        raise ValueError("cycle needs k >= 3")
    return Graph.from_edges(k, ((i, (i + 1) % k) for i in range(k)))


def path(k: int) -> Graph:
    """Path on ``k`` vertices."""
    if k < 1:
        raise ValueError("path needs k >= 1")
    return Graph.from_edges(k, ((i, i + 1) for i in range(k - 1)))


def fork(k: int) -> Graph:
    """D_k: path on k-1 vertices plus a leaf on the second-to-last vertex."""
    if k < 3:
        raise ValueError("fork needs k >= 3")
    if k == 3:
        # D_3 degenerates to the path on three vertices
        return path(3)
    edges = [(i, i + 1) for i in range(k - 2)]
    edges.append((k - 3, k - 1))
    return Graph.from_edges(k, edges)


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise ValueError("complete bipartite graph needs a, b >= 1")
    return Graph.from_edges(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def star(m: int) -> Graph:
    return complete_bipartite(1, m)


def make_named(kind: str, *args: int) -> Graph:
    makers = {
        "complete": complete,
        "cycle": cycle,
        "path": path,
        "fork": fork,
        "complete_bipartite": complete_bipartite,
        "star": star,
    }
    if kind not in makers:
        raise ValueError(f"unknown graph kind {kind!r}")
    return makers[kind](*args)


def hypercube(d: int) -> Graph:
    if not 0 <= d <= caps().hypercube_dim:
        raise CapExceeded(f"hypercube dimension {d} outside 0..{caps().hypercube_dim}")
    _check_size(1 << d)
    n = 1 << d
    adj = tuple(tuple(sorted(v ^ (1 << i) for i in range(d))) for v in range(n))
    return Graph._trusted(n, adj)


def grid(dim: int, side: int) -> Graph:
    if dim < 1 or side < 1:
        raise ValueError("grid needs positive dim and side")
    n = side**dim
    _check_size(n, "grid")
    edges = []
    for v in range(n):
        stride = 1
        for _ in range(dim):
            if (v // stride) % side < side - 1:
                edges.append((v, v + stride))
            stride *= side
    return Graph.from_edges(n, edges)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % p for p in range(2, int(q**0.5) + 1))


def _projective_points(q: int, r: int) -> np.ndarray:
    """Normalised representatives (first nonzero coordinate 1) of PG(r, q)."""
    pts = []
    for lead in range(r + 1):
        tail = r - lead
        for rest in itertools.product(range(q), repeat=tail):
            pts.append((0,) * lead + (1,) + rest)
    return np.array(pts, dtype=np.int64)


def projective_incidence(q: int, r: int = 2) -> AdmissiblePair:
    """Point-hyperplane incidence graph of PG(r, q) over the prime field F_q.

    Points get indices ``0..N-1`` and hyperplanes ``N..2N-1``.
    """
    if not _is_prime(q):
        raise ValueError(f"q={q} is not prime (prime powers are not supported)")
    if r < 2:
        raise ValueError("dimension r must be >= 2")
    N = (q ** (r + 1) - 1) // (q - 1)
    _check_size(2 * N, "projective incidence graph")
    P = _projective_points(q, r)
    assert len(P) == N
    edges = []
    chunk = max(1, 2**22 // max(N, 1))
    for start in range(0, N, chunk):
        block = (P[start : start + chunk] @ P.T) % q == 0
        for i, j in zip(*np.nonzero(block)):
            edges.append((int(j), N + start + int(i)))
    d = (q**r - 1) // (q - 1)
    return AdmissiblePair(Graph.from_edges(2 * N, edges), d, f"PG({r},{q})")


def cartesian_sum(G: Graph, H: Graph) -> Graph:
    n = G.n * H.n
    _check_size(n, "cartesian sum")
    edges = []
    for g in range(G.n):
        for h1, h2 in H.edges():
            edges.append((g * H.n + h1, g * H.n + h2))
    for g1, g2 in G.edges():
        for h in range(H.n):
            edges.append((g1 * H.n + h, g2 * H.n + h))
    return Graph.from_edges(n, edges)


def tensor_product(G: Graph, H: Graph) -> Graph:
    n = G.n * H.n
    _check_size(n, "tensor product")
    edges = []
    for g1, g2 in G.edges():
        for h1, h2 in H.edges():
            edges.append((g1 * H.n + h1, g2 * H.n + h2))
            edges.append((g1 * H.n + h2, g2 * H.n + h1))
    return Graph.from_edges(n, edges)


def disjoint_union(parts: Sequence[Graph]) -> Graph:
    n = sum(p.n for p in parts)
    _check_size(n, "disjoint union")
    edges, offset = [], 0
    for p in parts:
        edges.extend((u + offset, v + offset) for u, v in p.edges())
        offset += p.n
    return Graph.from_edges(n, edges)


# -- randomness -------------------------------------------------------------
class RandomSource:
    """Seeded stream backed by numpy's PCG64; identical seeds give identical streams."""

    def __init__(self, seed: int | np.random.SeedSequence):
        if isinstance(seed, np.random.SeedSequence):
            self._ss = seed
        else:
            self._ss = np.random.SeedSequence(int(seed))
        self.gen = np.random.Generator(np.random.PCG64(self._ss))

    @property
    def seed(self):
        return self._ss.entropy

    def fork(self, k: int) -> list["RandomSource"]:
        return [RandomSource(s) for s in self._ss.spawn(k)]


def as_rng(rng) -> RandomSource:
    if isinstance(rng, RandomSource):
        return rng
    return RandomSource(rng)


def configuration_model(n: int, d: int, rng) -> tuple[MultiGraph, Graph]:
    """Configuration-model multigraph on ``n`` vertices with ``d`` legs each.

    With ``d*n`` odd the last leg of the last vertex is dropped. Returns the
    multigraph and its underlying simple graph.
    """
    if n < 1 or d < 1:
        raise ValueError("configuration model needs n >= 1 and d >= 1")
    _check_size(n)
    rng = as_rng(rng)
    legs = np.repeat(np.arange(n, dtype=np.int64), d)
    if len(legs) % 2:
        legs = legs[:-1]
    legs = legs[rng.gen.permutation(len(legs))]
    pairs = legs.reshape(-1, 2)
    multi = MultiGraph(n, tuple((int(a), int(b)) for a, b in pairs))
    return multi, multi.simplify()


def random_graph(n: int, p: float, rng) -> Graph:
    """Erdos-Renyi G(n, p)."""
    rng = as_rng(rng)
    iu = np.triu_indices(n, 1)
    keep = rng.gen.random(len(iu[0])) < p
    return Graph.from_edges(n, zip(iu[0][keep].tolist(), iu[1][keep].tolist()))


def random_relabel(G: Graph, rng) -> Graph:
    rng = as_rng(rng)
    return G.relabel(rng.gen.permutation(G.n).tolist())


def random_tree(n: int, rng) -> Graph:
    rng = as_rng(rng)
    edges = [(i, int(rng.gen.integers(0, i))) for i in range(1, n)]
    return Graph.from_edges(n, edges)
