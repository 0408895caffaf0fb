"""Canonical labelling of small graphs.

Colour refinement to an equitable ordered partition, then an
individualisation-refinement search tree whose leaves are discrete
partitions.  The certificate of a leaf is the adjacency matrix read in leaf
order; the smallest certificate wins.  Two prunings keep symmetric graphs
cheap: children of a node are explored one per orbit of the automorphisms
found so far that fix the node's prefix, and a leaf that reproduces the
first leaf's certificate lets the search jump back to where the two paths
diverged.
"""

from __future__ import annotations

from .config import CapExceeded, caps
from .graph_core import Graph


def _refine(masks: tuple[int, ...], cells: list[list[int]]) -> list[list[int]]:
    """Split cells by neighbour counts into every cell until stable."""
    cells = [list(c) for c in cells]
    while True:
        cell_masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            cell_masks.append(m)
        new_cells: list[list[int]] = []
        changed = False
        for c in cells:
            if len(c) == 1:
                new_cells.append(c)
                continue
            sig = {v: tuple((masks[v] & cm).bit_count() for cm in cell_masks) for v in c}
            keys = sorted(set(sig.values()))
            if len(keys) == 1:
                new_cells.append(c)
                continue
            changed = True
            for k in keys:
                new_cells.append(sorted(v for v in c if sig[v] == k))
        cells = new_cells
        if not changed:
            return cells


def _individualise(cells: list[list[int]], idx: int, v: int) -> list[list[int]]:
    rest = [u for u in cells[idx] if u != v]
    return cells[:idx] + [[v], rest] + cells[idx + 1 :]


def _certificate(masks: tuple[int, ...], order: list[int]) -> tuple[int, ...]:
    pos = {v: i for i, v in enumerate(order)}
    rows = []
    for v in order:
        m = masks[v]
        r = 0
        while m:
            low = m & -m
            r |= 1 << pos[low.bit_length() - 1]
            m ^= low
        rows.append(r)
    return tuple(rows)


class _Jump(Exception):
    def __init__(self, level: int):
        self.level = level


def _orbit_reps(cell: list[int], autos: list[list[int]], prefix: list[int]) -> list[int]:
    """One representative per orbit of ``cell`` under automorphisms fixing ``prefix``."""
    stab = [a for a in autos if all(a[p] == p for p in prefix)]
    parent = {v: v for v in cell}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in stab:
        for v in cell:
            w = a[v]
            if w in parent:
                rv, rw = find(v), find(w)
                if rv != rw:
                    parent[max(rv, rw)] = min(rv, rw)
    return [v for v in cell if find(v) == v]


def canonical_order(G: Graph) -> list[int]:
    """Vertex order producing the canonical certificate of ``G``."""
    if G.n > caps().canonical_vertices:
        raise CapExceeded(f"canonical labelling capped at {caps().canonical_vertices} vertices")
    if G.n == 0:
        return []
    masks = G.masks
    start = _refine(masks, _degree_cells(G))

    best: dict = {"cert": None, "order": None, "first": None, "first_path": None}
    autos: list[list[int]] = []

    def leaf(order: list[int], path: list[int]) -> None:
        cert = _certificate(masks, order)
        if best["first"] is None:
            best["first"], best["first_path"] = (cert, order), list(path)
        if best["cert"] is None or cert < best["cert"]:
            best["cert"], best["order"] = cert, order
            return
        for ref_cert, ref_order in ((best["first"][0], best["first"][1]), (best["cert"], best["order"])):
            if cert == ref_cert:
                auto = [0] * G.n
                for a, b in zip(ref_order, order):
                    auto[a] = b
                autos.append(auto)
                fp = best["first_path"]
                common = 0
                while common < min(len(fp), len(path)) and fp[common] == path[common]:
                    common += 1
                # jump only if the automorphism maps the first path onto this one
                if (
                    ref_order is best["first"][1]
                    and common < min(len(fp), len(path))
                    and all(auto[fp[j]] == path[j] for j in range(common + 1))
                ):
                    raise _Jump(common)
                return

    def search(cells: list[list[int]], path: list[int]) -> None:
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            leaf([c[0] for c in cells], path)
            return
        level = len(path)
        explored: list[int] = []
        for v in list(cells[target]):
            if explored:
                reps = _orbit_reps(cells[target], autos, path)
                if v not in reps:
                    continue
            explored.append(v)
            try:
                search(_refine(masks, _individualise(cells, target, v)), path + [v])
            except _Jump as j:
                if j.level < level:
                    raise
                # the jump target is this node: its remaining children are re-checked by orbit

    search(start, [])
    return best["order"]


def _degree_cells(G: Graph) -> list[list[int]]:
    by_deg: dict[int, list[int]] = {}
    for v in range(G.n):
        by_deg.setdefault(G.degrees[v], []).append(v)
    return [by_deg[k] for k in sorted(by_deg)]


def canonical_key(G: Graph) -> bytes:
    """Isomorphism-invariant, collision-free byte key for ``G`` (n <= 64)."""
    order = canonical_order(G)
    rows = _certificate(G.masks, order)
    width = max(1, (G.n + 7) // 8)
    return G.n.to_bytes(2, "big") + b"".join(r.to_bytes(width, "big") for r in rows)


def canonical_form(G: Graph) -> Graph:
    order = canonical_order(G)
    pos = [0] * G.n
    for i, v in enumerate(order):
        pos[v] = i
    return G.relabel(pos)


def is_isomorphic(G: Graph, H: Graph) -> bool:
    if G.n != H.n or G.num_edges != H.num_edges or sorted(G.degrees) != sorted(H.degrees):
        return False
    return canonical_key(G) == canonical_key(H)
