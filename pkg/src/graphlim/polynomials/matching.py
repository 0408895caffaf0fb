"""Matching polynomials, matching measures and closed tree-like walks."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..config import CapExceeded, InadmissibleError, InfeasibleError, InvariantViolation, caps
from ..graph_core import AdmissiblePair, Graph
from .intpoly import IntPolynomial
from .roots import RootMeasure, real_roots

SEMICIRCLE_LOG_INTEGRAL = -0.5  # integral of log|x| against the standard semicircle on [-2, 2]


@dataclass(frozen=True)
class MatchingProfile:
    m: tuple[int, ...]  # m[k] = number of k-edge matchings
    n: int

    @property
    def mu(self) -> IntPolynomial:
        c = [0] * (self.n + 1)
        for k, mk in enumerate(self.m):
            c[self.n - 2 * k] = (-1) ** k * mk
        return IntPolynomial(c)

    @property
    def modified(self) -> IntPolynomial:
        """Sum (-1)^k m_k x^(n-k)."""
        c = [0] * (self.n + 1)
        for k, mk in enumerate(self.m):
            c[self.n - k] = (-1) ** k * mk
        return IntPolynomial(c)

    @property
    def total(self) -> int:
        return sum(self.m)

    @property
    def perfect(self) -> int:
        if self.n % 2:
            return 0
        return self.m[self.n // 2] if self.n // 2 < len(self.m) else 0


def bfs_order(G: Graph) -> list[int]:
    """Cuthill-McKee style order: BFS from a min-degree vertex per component, neighbours by degree."""
    seen = [False] * G.n
    order: list[int] = []
    for comp in G.components:
        start = min(comp, key=lambda v: (G.degrees[v], v))
        seen[start] = True
        queue = [start]
        for v in queue:
            for u in sorted(G.adj[v], key=lambda u: (G.degrees[u], u)):
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
        order += queue
    return order


def bandwidth(G: Graph, order: Sequence[int]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    return max((abs(pos[u] - pos[v]) for u, v in G.edges()), default=0)


def _padd(a: list[int], b: list[int], shift: int = 0) -> list[int]:
    n = max(len(a), len(b) + shift)
    out = a + [0] * (n - len(a))
    for i, x in enumerate(b):
        out[i + shift] += x
    return out


def matching_profile(G: Graph) -> MatchingProfile:
    """Exact matching counts by memoised removal of the lowest remaining vertex."""
    order = bfs_order(G)
    cp = caps()
    if G.num_edges > cp.matching_edges and bandwidth(G, order) > cp.matching_bandwidth:
        raise InfeasibleError(
            f"matching profile: {G.num_edges} edges and bandwidth above {cp.matching_bandwidth}; "
            "use the walk route for moments"
        )
    pos = {v: i for i, v in enumerate(order)}
    nb = [0] * G.n
    for v in range(G.n):
        for u in G.adj[v]:
            nb[pos[v]] |= 1 << pos[u]
    memo: dict[int, list[int]] = {0: [1]}

    def rec(R: int) -> list[int]:
        hit = memo.get(R)
        if hit is not None:
            return hit
        low = R & -R
        v = low.bit_length() - 1
        rest = R ^ low
        out = rec(rest)
        m = nb[v] & rest
        while m:
            ub = m & -m
            out = _padd(out, rec(rest ^ ub), 1)
            m ^= ub
        memo[R] = out
        return out

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * G.n + 100))
    try:
        m = rec((1 << G.n) - 1)
    finally:
        sys.setrecursionlimit(old)
    return MatchingProfile(tuple(m), G.n)


def matching_polynomial(G: Graph) -> IntPolynomial:
    return matching_profile(G).mu


def _need_d2(pr: AdmissiblePair) -> None:
    if pr.d < 2:
        raise InadmissibleError("the matching measure needs d >= 2")


def matching_roots(G: Graph) -> tuple[float, ...]:
    return real_roots(matching_polynomial(G)).roots


def matching_measure(pr: AdmissiblePair, roots: Sequence[float] | None = None) -> RootMeasure:
    """Uniform measure on the roots of mu scaled by 1/sqrt(d)."""
    _need_d2(pr)
    roots = matching_roots(pr.graph) if roots is None else roots
    s = math.sqrt(float(pr.d))
    return RootMeasure(tuple(float(r) / s for r in roots), "rho", {"graph": pr.name, "d": str(pr.d)})


def heilmann_lieb_check(pr: AdmissiblePair, roots: Sequence[float] | None = None) -> bool:
    """All roots real (enforced by the Sturm count) and |root| <= 2 sqrt(d-1)."""
    roots = matching_roots(pr.graph) if roots is None else roots
    if pr.d < 2:
        return all(abs(r) <= 1 + 1e-9 for r in roots)
    bound = 2.0 * math.sqrt(float(pr.d) - 1.0)
    return all(abs(r) <= bound + 1e-9 for r in roots)


# -- tree-like walks ----------------------------------------------------------------
def _walk_tables(G: Graph, L: int):
    """Per-directed-edge counts f(v, p, l) and per-vertex totals for even l <= L."""
    half = L // 2
    src = np.fromiter((v for v in range(G.n) for _ in G.adj[v]), dtype=np.int64, count=2 * G.num_edges)
    dst = np.fromiter((u for v in range(G.n) for u in G.adj[v]), dtype=np.int64, count=2 * G.num_edges)
    indptr = np.zeros(G.n + 1, dtype=np.int64)
    np.cumsum(G.degrees, out=indptr[1:])
    # reverse edge of (v -> u) is (u -> v): position of v in adj[u]
    rev = np.empty(len(src), dtype=np.int64)
    for e, (v, u) in enumerate(zip(src.tolist(), dst.tolist())):
        rev[e] = indptr[u] + G.adj[u].index(v)
    bound = max(1, G.n) * math.comb(2 * half, half) * max(1, G.max_degree) ** half
    dtype = np.int64 if bound < 2**62 else object
    # F[j][e] for edge e = (x -> y): f(y, x, 2j), walks from y avoiding the first step back to x
    F = [np.ones(len(src), dtype=dtype)]
    T = []  # T[j][v] = sum over edges (v -> w) of f(w, v, 2j)

    def vertex_sums(arr):
        cs = np.zeros(len(arr) + 1, dtype=dtype)
        if len(arr):
            cs[1:] = np.cumsum(arr)
        return cs[indptr[1:]] - cs[indptr[:-1]]

    T.append(vertex_sums(F[0]))
    for j in range(1, half + 1):
        acc = np.zeros(len(src), dtype=dtype)
        for a in range(j):
            b = j - 1 - a
            # from y: step to w != x, closed walk at w avoiding y, return, then continue at y avoiding x
            acc = acc + (T[a][dst] - F[a][rev]) * F[b]
        F.append(acc)
        T.append(vertex_sums(acc))
    W = [np.ones(G.n, dtype=dtype)]
    for j in range(1, half + 1):
        acc = np.zeros(G.n, dtype=dtype)
        for a in range(j):
            acc = acc + T[a] * W[j - 1 - a]
        W.append(acc)
    return W


def shortest_cycle_at_most(G: Graph, c: int) -> bool:
    """True iff G has a cycle of length <= c (level-by-level BFS with bitmasks)."""
    if c < 3:
        return False
    masks = G.masks
    depth = c // 2
    for v in range(G.n):
        seen = 1 << v
        cur = 1 << v
        for i in range(1, depth + 1):
            nxt = 0
            m = cur
            while m:
                low = m & -m
                nxt |= masks[low.bit_length() - 1]
                m ^= low
            nxt &= ~seen
            # a new vertex with two parents closes an even cycle of length <= 2i
            m = nxt
            while m:
                low = m & -m
                x = low.bit_length() - 1
                if (masks[x] & cur).bit_count() >= 2 and 2 * i <= c:
                    return True
                if (masks[x] & nxt).bit_count() >= 1 and 2 * i + 1 <= c:
                    return True
                m ^= low
            if not nxt:
                break
            seen |= nxt
            cur = nxt
    return False


_PATH_TREE_BUDGET = 2_000_000


def _path_tree_counts(G: Graph, v: int, half: int) -> list[int]:
    """Closed walks of lengths 0, 2, ..., 2*half from the root of the path tree at v.

    A node of the path tree is a self-avoiding path from v; its children extend
    the path by an unvisited neighbour, so counts depend only on (visited set, end).
    """
    masks = G.masks
    memo: dict[tuple[int, int], list[int]] = {}

    def g(mask: int, end: int, need: int) -> list[int]:
        key = (mask, end)
        hit = memo.get(key)
        if hit is not None and len(hit) > need:
            return hit
        if len(memo) > _PATH_TREE_BUDGET:
            raise InfeasibleError("path-tree walk count exceeds its state budget")
        S = [0] * need
        cand = masks[end] & ~mask
        if need:
            while cand:
                low = cand & -cand
                sub = g(mask | low, low.bit_length() - 1, need - 1)
                for a in range(need):
                    S[a] += sub[a]
                cand ^= low
        out = [1] + [0] * need
        for j in range(1, need + 1):
            out[j] = sum(S[a] * out[j - 1 - a] for a in range(j))
        memo[key] = out
        return out

    return g(1 << v, v, half)


def _walk_route(G: Graph, length: int) -> str:
    return "path_tree" if shortest_cycle_at_most(G, length // 2) else "cover"


def treelike_walk_count(G: Graph, v: int, length: int) -> int:
    """Closed tree-like walks of the given length from v.

    These are closed walks from the root of the path tree at v.  Below twice
    the girth they coincide with closed walks in the universal cover, which the
    vectorised edge recursion counts quickly; otherwise the path tree is used.
    """
    if length % 2:
        return 0
    if length > caps().walk_length:
        raise CapExceeded(f"walk length {length} exceeds cap {caps().walk_length}")
    if _walk_route(G, length) == "cover":
        return int(_walk_tables(G, length)[length // 2][v])
    return _path_tree_counts(G, v, length // 2)[length // 2]


def treelike_total(G: Graph, length: int) -> int:
    if length % 2:
        return 0
    return treelike_totals(G, length)[length // 2]


def treelike_totals(G: Graph, length: int) -> list[int]:
    """Totals over all roots for every even length 0, 2, ..., length."""
    if length > caps().walk_length:
        raise CapExceeded(f"walk length {length} exceeds cap {caps().walk_length}")
    half = length // 2
    if _walk_route(G, length) == "cover":
        return [int(sum(int(x) for x in w)) for w in _walk_tables(G, length)]
    tot = [0] * (half + 1)
    for v in range(G.n):
        for j, c in enumerate(_path_tree_counts(G, v, half)):
            tot[j] += c
    return tot


def cover_walk_total(G: Graph, length: int) -> int:
    """Closed walks of the given length in the universal cover, summed over roots."""
    if length % 2:
        return 0
    return int(sum(int(x) for x in _walk_tables(G, length)[length // 2]))


def rho_moment_via_walks(pr: AdmissiblePair, k: int) -> Fraction:
    if k % 2:
        return Fraction(0)
    return Fraction(treelike_total(pr.graph, k)) / (pr.graph.n * Fraction(pr.d) ** (k // 2))


def rho_moment_via_polynomial(pr: AdmissiblePair, k: int) -> Fraction:
    """Exact moment from the power sums of mu (Newton's identities)."""
    p = matching_polynomial(pr.graph).power_sums(k)[k]
    if k % 2:
        return Fraction(0) if p == 0 else p  # nonzero would signal a parity bug
    return p / (pr.graph.n * Fraction(pr.d) ** (k // 2))


# -- matching totals -------------------------------------------------------------
def matching_totals(G: Graph, profile: MatchingProfile | None = None) -> tuple[int, int]:
    prof = profile or matching_profile(G)
    M = prof.total
    re, im = prof.mu.eval_complex(Fraction(0), Fraction(1))
    if re * re + im * im != M * M:
        raise InvariantViolation("|mu(i)| disagrees with the total matching count")
    return M, prof.perfect


@dataclass(frozen=True)
class MatchparResult:
    lhs_M: float
    rhs_M: float
    lhs_Pm: float | None
    rhs_Pm: float | None

    @property
    def residual(self) -> float:
        r = abs(self.lhs_M - self.rhs_M)
        if self.lhs_Pm is not None:
            r = max(r, abs(self.lhs_Pm - self.rhs_Pm))
        return r


def matchpar_check(pr: AdmissiblePair, tol: float = 1e-8) -> MatchparResult:
    """Both log-integral identities for M and Pm; the Pm side is None when Pm = 0."""
    _need_d2(pr)
    G = pr.graph
    prof = matching_profile(G)
    M, Pm = matching_totals(G, prof)
    roots = real_roots(prof.mu).roots
    rho = matching_measure(pr, roots)
    d = float(pr.d)
    v = G.n
    lhs_M = 2.0 / v * math.log(M) - math.log(d)
    rhs_M = rho.integrate(lambda x: math.log(1.0 / d + x * x))
    lhs_P = rhs_P = None
    if Pm > 0:
        lhs_P = 2.0 / v * math.log(Pm) - math.log(d)
        rhs_P = 2.0 * rho.integrate(lambda x: math.log(abs(x)))
    res = MatchparResult(lhs_M, rhs_M, lhs_P, rhs_P)
    if res.residual > tol:
        raise InvariantViolation(f"matching log-integral identity off by {res.residual:.3e}")
    return res


def schrijver_check(pr: AdmissiblePair) -> tuple[float, float]:
    """(Pm^(2/v), (d-1)^(d-1)/d^(d-2)) for a d-regular bipartite graph."""
    G, d = pr.graph, pr.d
    if not (G.is_bipartite() and G.is_regular(int(d))):
        raise ValueError("needs a d-regular bipartite graph")
    _, Pm = matching_totals(G)
    lhs = math.exp(2.0 / G.n * math.log(Pm)) if Pm else 0.0
    rhs = (d - 1) ** (d - 1) / d ** (d - 2)
    return lhs, float(rhs)


def pm_limsup_bound(alpha: float) -> float:
    """Semicircle value of Pm^(2/v)/d: exp(log alpha + 2 * SEMICIRCLE_LOG_INTEGRAL) = alpha/e."""
    return alpha * math.exp(2 * SEMICIRCLE_LOG_INTEGRAL)
