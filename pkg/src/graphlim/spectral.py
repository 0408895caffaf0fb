"""Adjacency spectra and the discrete measures built from them."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import CapExceeded, InvariantViolation, caps
from .graph_core import AdmissiblePair, Graph
from .linalg import symmetric_eigen

_TIE = 1e-9


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: tuple[float, ...]  # descending
    residual: float | None = None
    method: str = "inrepo"

    def __len__(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class DiscreteMeasure:
    atoms: tuple[float, ...]
    weights: tuple[float, ...]
    kind: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.atoms) != len(self.weights):
            raise ValueError("atoms and weights differ in length")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if any(b < a for a, b in zip(self.atoms, self.atoms[1:])):
            raise ValueError("atoms must be sorted ascending")
        if self.total_mass > 1 + 1e-12:
            raise ValueError(f"total mass {self.total_mass} exceeds 1")

    @classmethod
    def uniform(cls, points: Sequence[float], kind: str = "", meta: dict | None = None) -> "DiscreteMeasure":
        pts = sorted(float(x) for x in points)
        w = 1.0 / len(pts) if pts else 0.0
        return cls(tuple(pts), (w,) * len(pts), kind, dict(meta or {}))

    @property
    def total_mass(self) -> float:
        return math.fsum(self.weights)

    def mass(self, lo: float, hi: float) -> float:
        """Mass of the open interval (lo, hi); atoms within 1e-9 of an end count as outside."""
        return math.fsum(w for x, w in zip(self.atoms, self.weights) if lo + _TIE < x < hi - _TIE)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# kind={self.kind}\n")
        for k in sorted(self.meta):
            buf.write(f"# {k}={self.meta[k]}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["atom", "weight"])
        for x, wt in zip(self.atoms, self.weights):
            w.writerow([repr(x), repr(wt)])
        return buf.getvalue()


def adjacency_spectrum(G: Graph, method: str = "auto", vectors: bool = False) -> SpectrumResult:
    """Full spectrum, sorted descending.

    ``method="inrepo"`` always uses the in-repo solver, ``"lapack"`` numpy's
    ``eigvalsh``; ``"auto"`` switches to LAPACK above the in-repo size cap.
    """
    cp = caps()
    if G.n > cp.dense_eigen_vertices:
        raise CapExceeded(f"dense eigensolve capped at {cp.dense_eigen_vertices} vertices")
    if method == "auto":
        method = "inrepo" if G.n <= cp.inrepo_eigen_vertices else "lapack"
    A = G.adjacency_matrix(float)
    residual = None
    if method == "inrepo":
        vals, Z = symmetric_eigen(A, vectors=vectors)
        if vectors and G.n:
            residual = float(np.abs(A @ Z - Z * vals).max())
    elif method == "lapack":
        if vectors:
            vals, Z = np.linalg.eigh(A)
            residual = float(np.abs(A @ Z - Z * vals).max()) if G.n else 0.0
        else:
            vals = np.linalg.eigvalsh(A)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SpectrumResult(tuple(float(x) for x in vals[::-1]), residual, method)


def _spectrum(pr: AdmissiblePair, spectrum: SpectrumResult | None) -> tuple[float, ...]:
    return (spectrum or adjacency_spectrum(pr.graph)).eigenvalues


def _meta(pr: AdmissiblePair) -> dict:
    return {"graph": pr.name or repr(pr.graph), "d": str(pr.d)}


def sigma(pr: AdmissiblePair, spectrum: SpectrumResult | None = None) -> DiscreteMeasure:
    d = float(pr.d)
    return DiscreteMeasure.uniform([x / d for x in _spectrum(pr, spectrum)], "sigma", _meta(pr))


def _check_r(pr: AdmissiblePair, r: int) -> None:
    if not 1 <= r <= pr.graph.n:
        raise ValueError(f"r={r} outside 1..{pr.graph.n}")


def sigma_top(pr: AdmissiblePair, r: int, spectrum: SpectrumResult | None = None) -> DiscreteMeasure:
    _check_r(pr, r)
    d = float(pr.d)
    vals = _spectrum(pr, spectrum)[:r]
    return DiscreteMeasure.uniform([x / d for x in vals], "sigma_top", _meta(pr) | {"r": r})


def sigma_bottom(pr: AdmissiblePair, r: int, spectrum: SpectrumResult | None = None) -> DiscreteMeasure:
    _check_r(pr, r)
    d = float(pr.d)
    vals = _spectrum(pr, spectrum)[-r:]
    return DiscreteMeasure.uniform([x / d for x in vals], "sigma_bottom", _meta(pr) | {"r": r})


def sigma_sqrt(pr: AdmissiblePair, spectrum: SpectrumResult | None = None) -> DiscreteMeasure:
    s = math.sqrt(float(pr.d))
    return DiscreteMeasure.uniform([x / s for x in _spectrum(pr, spectrum)], "sigma_sqrt", _meta(pr))


def moment(m: DiscreteMeasure, k: int) -> float:
    if k < 0:
        raise ValueError("moment order must be >= 0")
    total = m.total_mass
    if k == 0:
        return 1.0
    return math.fsum(w * x**k for x, w in zip(m.atoms, m.weights)) / total


def closed_walk_count(G: Graph, k: int) -> int:
    """trace(A^k) with exact integer arithmetic, i.e. hom(C_k, G) for k >= 3."""
    if k == 0:
        return G.n
    bound = max(1, G.max_degree) ** k * max(1, G.n)
    dtype = np.int64 if bound < 2**62 else object
    A = G.adjacency_matrix(np.int64).astype(dtype)
    P = np.eye(G.n, dtype=np.int64).astype(dtype)
    for _ in range(k):
        P = P @ A
    return int(sum(int(P[i, i]) for i in range(G.n)))


def moment_identity_value(pr: AdmissiblePair, k: int) -> Fraction:
    """Exact k-th moment of sigma: trace(A^k)/(v d^k)."""
    return Fraction(closed_walk_count(pr.graph, k)) / (pr.graph.n * Fraction(pr.d) ** k)


def dirac_mass(pr: AdmissiblePair, eps: float, spectrum: SpectrumResult | None = None) -> float:
    return sigma(pr, spectrum).mass(-eps, eps)


def dirac_concentration_check(pr: AdmissiblePair, eps: float, spectrum: SpectrumResult | None = None) -> bool:
    """sigma((-eps, eps)) >= 1 - 1/(eps^2 d)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return dirac_mass(pr, eps, spectrum) >= 1.0 - 1.0 / (eps * eps * float(pr.d)) - 1e-12


def top_lower_edge_check(pr: AdmissiblePair, r: int, spectrum: SpectrumResult | None = None) -> bool:
    """min atom of sigma_top(r) >= -r/(v-r)."""
    _check_r(pr, r)
    n = pr.graph.n
    if r == n:
        return True
    return min(sigma_top(pr, r, spectrum).atoms) >= -r / (n - r) - 1e-9


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def semicircle_moment(k: int, alpha: float = 1.0) -> float:
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    if k % 2:
        return 0.0
    return alpha ** (k // 2) * catalan(k // 2)


def _cdf_grid(a: DiscreteMeasure, b: DiscreteMeasure) -> list[float]:
    pts = sorted(set(a.atoms) | set(b.atoms))
    grid: list[float] = []
    for x in pts:
        if grid and x - grid[-1] <= _TIE:
            grid[-1] = x
        else:
            grid.append(x)
    return grid


def _cdf(m: DiscreteMeasure, x: float) -> float:
    i = int(np.searchsorted(np.asarray(m.atoms), x + _TIE, side="right"))
    return math.fsum(m.weights[:i])


def _require_probability(m: DiscreteMeasure) -> None:
    if abs(m.total_mass - 1.0) > 1e-9:
        raise ValueError(f"not a probability measure (mass {m.total_mass})")


def cdf_distance(a: DiscreteMeasure, b: DiscreteMeasure) -> float:
    """Kolmogorov distance between right-continuous step CDFs; near-equal atoms merge."""
    _require_probability(a)
    _require_probability(b)
    ca = np.concatenate([[0.0], np.cumsum(a.weights)])
    cb = np.concatenate([[0.0], np.cumsum(b.weights)])
    xa, xb = np.asarray(a.atoms), np.asarray(b.atoms)
    best = 0.0
    for x in _cdf_grid(a, b):
        fa = ca[np.searchsorted(xa, x + _TIE, side="right")]
        fb = cb[np.searchsorted(xb, x + _TIE, side="right")]
        best = max(best, abs(float(fa - fb)))
    return best


def gaussian_cdf_distance(m: DiscreteMeasure, sd: float = 1.0) -> float:
    """sup |F_m - Phi| over both one-sided limits at every atom."""
    _require_probability(m)
    best = 0.0
    acc = 0.0
    grid = _cdf_grid(m, m)
    xs = np.asarray(m.atoms)
    cw = np.concatenate([[0.0], np.cumsum(m.weights)])
    for x in grid:
        phi = 0.5 * (1.0 + math.erf(x / (sd * math.sqrt(2.0))))
        left = float(cw[np.searchsorted(xs, x - _TIE, side="left")])
        acc = float(cw[np.searchsorted(xs, x + _TIE, side="right")])
        best = max(best, abs(left - phi), abs(acc - phi))
    return best


def consecutive_distances(measures: Sequence[DiscreteMeasure]) -> list[float]:
    """Kolmogorov distances between neighbours in a sequence (Cauchy-type diagnostic)."""
    return [cdf_distance(a, b) for a, b in zip(measures, measures[1:])]


def check_spectrum(pr: AdmissiblePair, spectrum: SpectrumResult) -> None:
    """Raise if the count, trace or eigenvalue-bound invariants fail."""
    n = pr.graph.n
    vals = spectrum.eigenvalues
    if len(vals) != n:
        raise InvariantViolation("spectrum has the wrong length")
    if abs(math.fsum(vals)) > 1e-8 * max(n, 1):
        raise InvariantViolation("eigenvalues do not sum to zero")
    d = float(pr.d)
    if vals and max(abs(x) for x in vals) > d + 1e-9:
        raise InvariantViolation("eigenvalue exceeds the degree bound")


def hypercube_spectrum(d: int) -> list[int]:
    """Closed form for Q_d: d - 2i with multiplicity C(d, i), descending."""
    return [d - 2 * i for i in range(d + 1) for _ in range(math.comb(d, i))]
