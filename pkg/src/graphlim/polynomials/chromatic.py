"""Chromatic polynomials, their root measures and the large-|xi| value identity."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from ..canon import canonical_key
from ..config import InfeasibleError, caps
from ..density import t
from ..graph_core import AdmissiblePair, Graph, RandomSource, complete, star
from .intpoly import IntPolynomial
from .roots import RootMeasure, complex_roots, log_abs_complex

SOKAL_CONSTANT = 8.0

_X = IntPolynomial([0, 1])


def _falling(n: int) -> IntPolynomial:
    return IntPolynomial.from_roots(range(n))


def _contract(G: Graph, u: int, v: int) -> Graph:
    """Merge v into u; parallel edges collapse."""
    idx = [i - (i > v) for i in range(G.n)]
    idx[v] = idx[u]
    edges = {(min(idx[a], idx[b]), max(idx[a], idx[b])) for a, b in G.edges() if idx[a] != idx[b]}
    return Graph.from_edges(G.n - 1, edges)


def _delete_vertex(G: Graph, v: int) -> Graph:
    return G.induced([u for u in range(G.n) if u != v])


def chromatic_polynomial(G: Graph) -> IntPolynomial:
    """Exact chromatic polynomial by memoised deletion-contraction with closed-form shortcuts."""
    memo: dict[bytes, IntPolynomial] = {}
    limit = caps().chromatic_edges
    can_key = G.n <= caps().canonical_vertices

    def rec(H: Graph) -> IntPolynomial:
        n, m = H.n, H.num_edges
        if m == 0:
            return IntPolynomial.monomial(n)
        if H.num_components > 1:
            out = IntPolynomial([1])
            for comp in H.components:
                out = out * rec(H.induced(comp))
            return out
        if m == n - 1:
            return _X * (IntPolynomial([-1, 1]) ** (n - 1))
        if 2 * m == n * (n - 1):
            return _falling(n)
        leaf = next((v for v in range(n) if H.degrees[v] == 1), None)
        if leaf is not None:
            return rec(_delete_vertex(H, leaf)) * IntPolynomial([-1, 1])
        if n == m:  # a single cycle
            return IntPolynomial([-1, 1]) ** n + IntPolynomial([-1, 1]) * (-1) ** n
        key = canonical_key(H) if can_key else None
        if key is not None and key in memo:
            return memo[key]
        if m > limit:
            raise InfeasibleError(f"chromatic polynomial: {m} edges exceed the cap {limit}")
        u, v = max(H.edges(), key=lambda e: (H.degrees[e[0]] + H.degrees[e[1]], -e[0], -e[1]))
        out = rec(H.remove_edge(u, v)) - rec(_contract(H, u, v))
        if key is not None:
            memo[key] = out
        return out

    return rec(G)


def brute_force_colorings(G: Graph, q: int) -> int:
    """Count proper q-colourings by backtracking (test oracle)."""
    col = [-1] * G.n

    def rec(i: int) -> int:
        if i == G.n:
            return 1
        used = {col[u] for u in G.adj[i] if u < i}
        total = 0
        for c in range(q):
            if c not in used:
                col[i] = c
                total += rec(i + 1)
        col[i] = -1
        return total

    return rec(0)


def chromatic_roots(G: Graph, poly: IntPolynomial | None = None, rng: RandomSource | None = None) -> list[complex]:
    return complex_roots(poly or chromatic_polynomial(G), rng=rng)


def chromatic_root_measure(
    pr: AdmissiblePair,
    poly: IntPolynomial | None = None,
    rng: RandomSource | None = None,
    constant: float = SOKAL_CONSTANT,
) -> RootMeasure:
    """Uniform measure on the chromatic roots scaled by 1/d; root-bound violations go in ``meta``."""
    G = pr.graph
    poly = poly or chromatic_polynomial(G)
    roots = complex_roots(poly, rng=rng)
    d = float(pr.d)
    atoms = tuple(z / d for z in roots)
    violations = sum(1 for z in atoms if abs(z) > constant)
    return RootMeasure(
        atoms,
        "nu",
        {"graph": pr.name, "d": str(pr.d), "root_bound": constant, "bound_violations": violations},
    )


def root_sum_residual(G: Graph, roots: Sequence[complex]) -> float:
    """|sum of roots - e(G)|."""
    s = complex(math.fsum(z.real for z in roots), math.fsum(z.imag for z in roots))
    return abs(s - G.num_edges)


def _exact(z: complex) -> tuple[Fraction, Fraction]:
    return Fraction(z.real), Fraction(z.imag)


def log_abs_chromatic(poly: IntPolynomial, point: tuple[Fraction, Fraction]) -> float:
    re, im = poly.eval_complex(*point)
    if re == 0 and im == 0:
        raise ValueError("the chromatic polynomial vanishes at the evaluation point")
    return log_abs_complex(re, im)


def log_chvalue_ratio(pr: AdmissiblePair, xi: complex, poly: IntPolynomial | None = None) -> float:
    """log(|ch(G, xi d)|^(1/v) / (|xi| d)), evaluated exactly before the logarithm."""
    G = pr.graph
    poly = poly or chromatic_polynomial(G)
    d = Fraction(pr.d)
    xr, xim = _exact(complex(xi))
    point = (xr * d, xim * d)
    return log_abs_chromatic(poly, point) / G.n - math.log(abs(complex(xi)) * float(d))


def chvalue_ratio(pr: AdmissiblePair, xi: complex, poly: IntPolynomial | None = None) -> float:
    if abs(complex(xi)) < 8:
        raise ValueError("the value theorem needs |xi| >= 8")
    return math.exp(log_chvalue_ratio(pr, xi, poly))


def chvalue_identity_check(
    pr: AdmissiblePair, xi: complex, poly: IntPolynomial | None = None, rng: RandomSource | None = None
) -> float:
    """|log ratio - integral of log|1 - z/xi| d nu| over the computed roots."""
    poly = poly or chromatic_polynomial(pr.graph)
    nu = chromatic_root_measure(pr, poly, rng)
    xi = complex(xi)
    integral = nu.integrate(lambda z: math.log(abs(1 - z / xi)))
    return abs(log_chvalue_ratio(pr, xi, poly) - integral)


def chvalue_limit(pr: AdmissiblePair, xi: complex) -> float:
    """exp(-t(K2) Re(1/(2 xi)))."""
    tk = float(t(complete(2), pr).exact)
    return math.exp(-tk * (1 / (2 * complex(xi))).real)


def star_sequence(ms: Sequence[int], xi: complex = 10) -> list[dict]:
    """Stars K_{1,m} with d = m: value ratio against its limit."""
    rows = []
    for m in ms:
        pr = AdmissiblePair(star(m), m, f"K1,{m}")
        ratio = chvalue_ratio(pr, xi)
        limit = chvalue_limit(pr, xi)
        rows.append(
            {
                "m": m,
                "d": m,
                "t_K2": t(complete(2), pr).exact,
                "ratio": ratio,
                "limit": limit,
                "log_residual": abs(math.log(ratio) - math.log(limit)),
                "ratio_residual": abs(ratio - 1.0),
            }
        )
    return rows
