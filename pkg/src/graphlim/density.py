"""Exact homomorphism counts and the normalised densities built from them."""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .canon import canonical_key
from .config import CapExceeded, InadmissibleError, InvariantViolation, caps
from .graph_core import AdmissiblePair, Graph, complete, complete_bipartite, cycle, fork, path, star
from .graph_core import tensor_product as _tensor


# -- patterns -------------------------------------------------------------------
_PATTERN_RE = re.compile(r"^([KCPDSE])(\d+)(?:,(\d+))?$")


def parse_pattern(name: str) -> Graph:
    """``K4``, ``C5``, ``P3``, ``D4``, ``S3`` (star K_{1,3}), ``E2`` (edgeless), ``K3,3``."""
    m = _PATTERN_RE.match(name.strip())
    if not m:
        raise ValueError(f"cannot parse pattern {name!r}")
    kind, a, b = m.group(1), int(m.group(2)), m.group(3)
    if b is not None:
        if kind != "K":
            raise ValueError(f"only K takes two parameters: {name!r}")
        return complete_bipartite(a, int(b))
    return {"K": complete, "C": cycle, "P": path, "D": fork, "S": star, "E": Graph.empty}[kind](a)


def _check_pattern(F: Graph) -> None:
    if F.n > caps().pattern_vertices:
        raise CapExceeded(f"pattern has {F.n} vertices (cap {caps().pattern_vertices})")


def _search_order(F: Graph, vertices: Sequence[int], root: int | None = None) -> list[int]:
    """Connected order of one component: each vertex has a placed neighbour.

    Greedy by number of already-placed neighbours, then degree, then index.
    """
    if root is None:
        root = max(vertices, key=lambda v: (F.degrees[v], -v))
    order, placed = [root], {root}
    rest = set(vertices) - placed
    while rest:
        v = max(
            rest,
            key=lambda u: (sum(1 for w in F.adj[u] if w in placed), F.degrees[u], -u),
        )
        order.append(v)
        placed.add(v)
        rest.discard(v)
    return order


def _iter_bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


# -- counting -----------------------------------------------------------------
def _hom_tree(F: Graph, comp: Sequence[int], G: Graph) -> int:
    """Leaf elimination on a tree component: h_u = prod over children of A h_c."""
    root = comp[0]
    parent = {root: None}
    order = [root]
    for v in order:
        for u in F.adj[v]:
            if u not in parent:
                parent[u] = v
                order.append(u)
    nbr = np.fromiter((u for nb in G.adj for u in nb), dtype=np.int64, count=2 * G.num_edges)
    indptr = np.zeros(G.n + 1, dtype=np.int64)
    np.cumsum(G.degrees, out=indptr[1:])
    bound = G.n * max(1, G.max_degree) ** max(0, len(comp) - 1)
    dtype = np.int64 if bound < 2**62 else object
    h = {v: np.ones(G.n, dtype=dtype) for v in comp}
    for v in reversed(order[1:]):
        gathered = h[v][nbr]
        cs = np.zeros(len(gathered) + 1, dtype=dtype)
        if len(gathered):
            cs[1:] = np.cumsum(gathered)
        h[parent[v]] = h[parent[v]] * (cs[indptr[1:]] - cs[indptr[:-1]])
        del h[v]
    return int(sum(int(x) for x in h[root])) if dtype is object else int(h[root].sum())


class _Plan:
    """Search order with back-neighbour and frontier bookkeeping."""

    def __init__(self, F: Graph, order: list[int]):
        pos = {v: i for i, v in enumerate(order)}
        k = len(order)
        self.k = k
        self.back = [[pos[u] for u in F.adj[v] if pos[u] < i] for i, v in enumerate(order)]
        # positions < i that still have a neighbour at position >= i
        self.frontier = []
        for i in range(k + 1):
            fr = [j for j in range(i) if any(pos[u] >= i for u in F.adj[order[j]])]
            self.frontier.append(tuple(fr))


def _hom_connected(F: Graph, order: list[int], G: Graph, first: int | None = None) -> int:
    plan = _Plan(F, order)
    masks, full = G.masks, G.full_mask
    k = plan.k
    if k == 1:
        return 1 if first is not None else G.n
    assign = [0] * k
    shared: dict = {}
    rooted: dict = {}

    def rec(i: int) -> int:
        fr = plan.frontier[i]
        key = (i,) + tuple(assign[j] for j in fr)
        memo = rooted if (fr and fr[0] == 0) else shared
        hit = memo.get(key)
        if hit is not None:
            return hit
        cand = full
        for j in plan.back[i]:
            cand &= masks[assign[j]]
        if i == k - 1:
            total = cand.bit_count()
        else:
            total = 0
            for x in _iter_bits(cand):
                assign[i] = x
                total += rec(i + 1)
        memo[key] = total
        return total

    total = 0
    starts = [first] if first is not None else range(G.n)
    for x in starts:
        assign[0] = x
        rooted.clear()
        total += rec(1)
    return total


def hom_count(F: Graph, G: Graph) -> int:
    """Number of adjacency-preserving maps V(F) -> V(G)."""
    _check_pattern(F)
    if not F.is_bipartite() and G.is_bipartite():
        return 0
    total = 1
    for comp in F.components:
        if len(comp) == 1:
            total *= G.n
        elif len(comp) - 1 == sum(F.degrees[v] for v in comp) // 2:
            total *= _hom_tree(F, comp, G)
        else:
            total *= _hom_connected(F, _search_order(F, comp), G)
        if total == 0:
            return 0
    return total


def hom_count_backtrack(F: Graph, G: Graph) -> int:
    """Generic route only (no forest fast path); used to cross-check."""
    _check_pattern(F)
    total = 1
    for comp in F.components:
        total *= _hom_connected(F, _search_order(F, comp), G)
    return total


def inj_count(F: Graph, G: Graph) -> int:
    """Number of injective homomorphisms V(F) -> V(G)."""
    _check_pattern(F)
    if F.n > G.n or (not F.is_bipartite() and G.is_bipartite()):
        return 0
    order: list[int] = []
    for comp in F.components:
        order += _search_order(F, comp)
    plan = _Plan(F, order)
    masks, full = G.masks, G.full_mask
    k = plan.k
    if k == 0:
        return 1
    assign = [0] * k

    def rec(i: int, used: int) -> int:
        cand = full & ~used
        for j in plan.back[i]:
            cand &= masks[assign[j]]
        if i == k - 1:
            return cand.bit_count()
        total = 0
        for x in _iter_bits(cand):
            assign[i] = x
            total += rec(i + 1, used | (1 << x))
        return total

    return rec(0, 0)


def rooted_hom_count(F: Graph, o: int, G: Graph, p: int) -> int:
    """Homomorphisms of connected ``F`` into ``G`` sending ``o`` to ``p``."""
    _check_pattern(F)
    if not F.is_connected():
        raise ValueError("rooted densities need a connected pattern")
    return _hom_connected(F, _search_order(F, list(range(F.n)), root=o), G, first=p)


# -- densities ----------------------------------------------------------------
@dataclass(frozen=True)
class DensityValue:
    exact: Fraction
    denominator: str = field(default="", compare=False)

    @property
    def value(self) -> float:
        return float(self.exact)

    @property
    def numerator(self) -> int:
        return self.exact.numerator

    def __float__(self) -> float:
        return self.value

    def as_text(self) -> str:
        return f"{self.exact.numerator}/{self.exact.denominator}"


def _components_split(F: Graph) -> tuple[int, int]:
    c = F.num_components
    c2 = sum(1 for comp in F.components if len(comp) >= 2)
    return c, c2


def t(F: Graph, pr: AdmissiblePair) -> DensityValue:
    """hom(F,G) / (v(G)^c(F) d^(v-c)(F))."""
    if F.n == 0:
        raise ValueError("empty pattern")
    G, d = pr.graph, pr.d
    c, _ = _components_split(F)
    den = Fraction(G.n) ** c * Fraction(d) ** (F.n - c)
    return DensityValue(hom_count(F, G) / den, f"v^{c} d^{F.n - c}")


def t_inj(F: Graph, pr: AdmissiblePair) -> DensityValue:
    """inj(F,G) / (v^c d^c2 (d-1)^(v-c-c2)); c2 counts components with >= 2 vertices."""
    if F.n == 0:
        raise ValueError("empty pattern")
    G, d = pr.graph, Fraction(pr.d)
    c, c2 = _components_split(F)
    e = F.n - c - c2
    if e > 0 and d == 1:
        raise InadmissibleError("injective density with d = 1 needs components of <= 2 vertices")
    den = Fraction(G.n) ** c * d**c2 * (d - 1) ** e
    return DensityValue(inj_count(F, G) / den, f"v^{c} d^{c2} (d-1)^{e}")


def t_rooted(F: Graph, o: int, pr: AdmissiblePair, p: int) -> Fraction:
    return rooted_hom_count(F, o, pr.graph, p) / Fraction(pr.d) ** (F.n - 1)


def hom_vs_inj_gap(F: Graph, pr: AdmissiblePair) -> Fraction:
    if not F.is_connected():
        raise ValueError("gap is defined for connected patterns")
    return t(F, pr).exact - t_inj(F, pr).exact


# -- quotients ------------------------------------------------------------------
@dataclass(frozen=True)
class Quotient:
    graph: Graph
    multiplicity: int


def _set_partitions(n: int):
    """Restricted growth strings of length n."""
    a = [0] * n

    def rec(i: int, m: int):
        if i == n:
            yield tuple(a)
            return
        for b in range(m + 1):
            a[i] = b
            yield from rec(i + 1, max(m, b + 1))

    if n == 0:
        yield ()
        return
    yield from rec(1, 1)


def enumerate_quotients(F: Graph, mode: str = "all") -> list[Quotient]:
    """Quotients of ``F`` whose blocks are independent sets, with multiplicity.

    ``mode="across"`` only merges vertices of distinct components;
    ``mode="one_merge"`` additionally requires exactly one fewer component
    (each component of F still maps injectively).
    """
    if F.n > caps().quotient_vertices:
        raise CapExceeded(f"quotient enumeration capped at {caps().quotient_vertices} vertices")
    if mode not in ("all", "across", "one_merge"):
        raise ValueError(f"unknown mode {mode!r}")
    comp_of = {v: i for i, comp in enumerate(F.components) for v in comp}
    found: dict[bytes, list] = {}
    for rgs in _set_partitions(F.n):
        nb = max(rgs, default=-1) + 1
        blocks: list[list[int]] = [[] for _ in range(nb)]
        for v, b in enumerate(rgs):
            blocks[b].append(v)
        ok = True
        for blk in blocks:
            if any(F.has_edge(u, w) for i, u in enumerate(blk) for w in blk[i + 1 :]):
                ok = False
                break
            if mode != "all" and len({comp_of[v] for v in blk}) != len(blk):
                ok = False
                break
        if not ok:
            continue
        Q = Graph.from_edges(nb, ((rgs[u], rgs[v]) for u, v in F.edges()))
        if mode == "one_merge" and Q.num_components != F.num_components - 1:
            continue
        key = canonical_key(Q)
        if key in found:
            found[key][1] += 1
        else:
            found[key] = [Q, 1]
    return [Quotient(q, m) for _, (q, m) in sorted(found.items(), key=lambda kv: (kv[1][0].n, kv[0]))]


# -- reports -------------------------------------------------------------------
def alpha_regularity_report(seq: Sequence[AdmissiblePair]) -> list[dict]:
    if not seq:
        raise ValueError("empty sequence")
    K2, P3 = complete(2), path(3)
    rows = []
    for pr in seq:
        tk = t(K2, pr).exact
        tp = t(P3, pr).exact
        ratios = np.array(pr.graph.degrees, dtype=float) / float(pr.d)
        q = np.quantile(ratios, [0.0, 0.25, 0.5, 0.75, 1.0]) if len(ratios) else [0.0] * 5
        rows.append(
            {
                "name": pr.name,
                "n": pr.graph.n,
                "d": str(pr.d),
                "t_K2": tk,
                "t_P3": tp,
                "residual": abs(tp - tk * tk),
                "deg_ratio_quantiles": [float(x) for x in q],
            }
        )
    for row in rows:
        row["alpha_hat"] = rows[-1]["t_K2"]
    return rows


def essential_girth_profile(seq: Sequence[AdmissiblePair], k_max: int) -> dict:
    """Exact t_inj(C_k) for 3 <= k <= k_max along the sequence, with trend flags."""
    if k_max > caps().pattern_vertices:
        raise CapExceeded(f"k_max {k_max} exceeds the pattern cap")
    ks = list(range(3, k_max + 1))
    table = [[t_inj(cycle(k), pr).exact for k in ks] for pr in seq]
    nonincreasing = {
        k: all(table[i + 1][j] <= table[i][j] for i in range(len(seq) - 1)) for j, k in enumerate(ks)
    }
    return {"ks": ks, "names": [pr.name for pr in seq], "values": table, "nonincreasing": nonincreasing}


def product_density_check(F: Graph, factors: Sequence[AdmissiblePair]) -> tuple[Fraction, Fraction]:
    """t(F, tensor product, prod delta) against prod t(F, factor, delta)."""
    if not factors:
        raise ValueError("need at least one factor")
    G = factors[0].graph
    d = Fraction(factors[0].d)
    for fac in factors[1:]:
        G = _tensor(G, fac.graph)
        d *= Fraction(fac.d)
    lhs = t(F, AdmissiblePair(G, d)).exact
    rhs = Fraction(1)
    for fac in factors:
        rhs *= t(F, fac).exact
    if lhs != rhs:
        raise InvariantViolation(f"product density mismatch: {lhs} != {rhs}")
    return lhs, rhs


@dataclass
class ConvergenceTable:
    rows: list[str]
    ds: list[str]
    patterns: list[str]
    cells: list[list[DensityValue]]
    kind: str = "t"
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for k in sorted(self.meta):
            buf.write(f"# {k}={self.meta[k]}\n")
        header = ["graph", "d"]
        for p in self.patterns:
            header += [p, f"{p}_exact"]
        w.writerow(header)
        for name, d, row in zip(self.rows, self.ds, self.cells):
            out = [name, d]
            for cell in row:
                out += [repr(cell.value), cell.as_text()]
            w.writerow(out)
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "kind": self.kind,
            "meta": self.meta,
            "patterns": self.patterns,
            "rows": [
                {
                    "graph": name,
                    "d": d,
                    "values": {p: {"exact": c.as_text(), "value": c.value} for p, c in zip(self.patterns, row)},
                }
                for name, d, row in zip(self.rows, self.ds, self.cells)
            ],
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def convergence_table(
    seq: Sequence[AdmissiblePair], patterns: Iterable[str], kind: str = "t", meta: dict | None = None
) -> ConvergenceTable:
    fn = {"t": t, "t_inj": t_inj}[kind]
    pats = list(patterns)
    graphs = [parse_pattern(p) for p in pats]
    cells = [[fn(F, pr) for F in graphs] for pr in seq]
    return ConvergenceTable(
        rows=[pr.name or f"G{i}" for i, pr in enumerate(seq)],
        ds=[str(pr.d) for pr in seq],
        patterns=pats,
        cells=cells,
        kind=kind,
        meta=dict(meta or {}),
    )
