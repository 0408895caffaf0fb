"""Real roots by Sturm sequences, complex roots by Aberth iteration, and root measures."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..config import ConvergenceError, InvariantViolation
from ..graph_core import RandomSource
from .intpoly import IntPolynomial, _frac_divmod, _to_frac, primitive, squarefree_decomposition


@dataclass(frozen=True)
class RealRootSet:
    roots: tuple[float, ...]  # ascending, with multiplicity

    def __len__(self) -> int:
        return len(self.roots)


@dataclass(frozen=True)
class RootMeasure:
    """Uniform measure on (possibly complex) points."""

    atoms: tuple
    kind: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def weight(self) -> float:
        return 1.0 / len(self.atoms) if self.atoms else 0.0

    def moment(self, k: int) -> complex | float:
        if not self.atoms:
            return 0.0
        if all(isinstance(a, float) for a in self.atoms):
            return math.fsum(a**k for a in self.atoms) / len(self.atoms)
        re = math.fsum((a**k).real for a in self.atoms)
        im = math.fsum((a**k).imag for a in self.atoms)
        return complex(re, im) / len(self.atoms)

    def integrate(self, f) -> float:
        return math.fsum(f(a) for a in self.atoms) / len(self.atoms)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# kind={self.kind}\n")
        for k in sorted(self.meta):
            buf.write(f"# {k}={self.meta[k]}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im", "weight"])
        for a in self.atoms:
            z = complex(a)
            w.writerow([repr(z.real), repr(z.imag), repr(self.weight)])
        return buf.getvalue()


# -- Sturm machinery ------------------------------------------------------------
def _sign_at_dyadic(p: IntPolynomial, a: int, k: int) -> int:
    """Sign of p(a / 2^k) computed exactly as 2^(k n) p(a / 2^k)."""
    n = p.degree
    acc = 0
    for i in range(n, -1, -1):
        acc = acc * a + (p[i] << (k * (n - i)))
    return (acc > 0) - (acc < 0)


def sturm_chain(p: IntPolynomial) -> list[IntPolynomial]:
    """Sturm sequence with each member rescaled by a positive factor to integers."""
    chain = [p, p.derivative()]
    a, b = _to_frac(chain[0]), _to_frac(chain[1])
    while True:
        _, r = _frac_divmod(a, b)
        if not r:
            break
        neg = [-c for c in r]
        chain.append(primitive(neg, positive_lead=False))
        # keep exact sign: primitive() only divides by a positive gcd and multiplies by a positive lcm
        a, b = b, neg
    return chain


def _variations(chain: Sequence[IntPolynomial], a: int, k: int) -> int:
    signs = [s for s in (_sign_at_dyadic(q, a, k) for q in chain) if s]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def _cauchy_bound(p: IntPolynomial) -> int:
    lead = abs(p.leading)
    return 1 + max((abs(c) + lead - 1) // lead for c in p.coefficients[:-1]) if p.degree > 0 else 1


def _isolate(p: IntPolynomial, tol: float) -> list[float]:
    """Roots of a square-free polynomial with only real roots."""
    n = p.degree
    if n <= 0:
        return []
    chain = sturm_chain(p)
    B = _cauchy_bound(p) + 1
    k = 0
    lo, hi = -B, B
    total = _variations(chain, lo, k) - _variations(chain, hi, k)
    if total != n:
        raise InvariantViolation(f"Sturm count {total} != degree {n}: non-real roots present")
    # intervals (a, b] at scale 2^-k, each with its root count
    stack = [(lo, hi, k, total)]
    isolated = []
    while stack:
        a, b, k, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            isolated.append((a, b, k))
            continue
        a2, b2, k2 = 2 * a, 2 * b, k + 1
        mid = a + b
        vm = _variations(chain, mid, k2)
        left = _variations(chain, a2, k2) - vm
        stack.append((a2, mid, k2, left))
        stack.append((mid, b2, k2, cnt - left))
        if k2 > 200:
            raise ConvergenceError("root isolation did not separate roots")
    out = []
    for a, b, k in isolated:
        sb = _sign_at_dyadic(p, b, k)
        if sb == 0:
            out.append(b / 2**k)
            continue
        while (b - a) / 2**k > tol:
            a, b, k = 2 * a, 2 * b, k + 1
            mid = (a + b) // 2
            sm = _sign_at_dyadic(p, mid, k)
            if sm == 0:
                a = b = mid
                break
            if sm == sb:
                b = mid
            else:
                a = mid
        out.append((a + b) / 2 ** (k + 1))
    return out


def real_roots(p: IntPolynomial, tol: float = 1e-12) -> RealRootSet:
    """All roots with multiplicity, assuming they are real; raises if that fails."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    roots: list[float] = []
    zeros = 0
    while p.degree > 0 and p[0] == 0:
        p = IntPolynomial(p.coefficients[1:])
        zeros += 1
    roots += [0.0] * zeros
    for f, mult in squarefree_decomposition(p):
        roots += _isolate(f, tol) * mult
    return RealRootSet(tuple(sorted(roots)))


# -- complex roots --------------------------------------------------------------
def _aberth(p: IntPolynomial, rng: RandomSource, tol: float, sweeps: int) -> list[complex]:
    n = p.degree
    c = np.array([float(x) for x in p.coefficients[::-1]], dtype=complex)  # descending
    c /= c[0]
    dc = np.polyder(c)
    bound = 1.0 + float(np.max(np.abs(c[1:]))) if n else 1.0
    for attempt in range(4):
        radius = min(bound, max(1e-3, abs(c[-1]) ** (1.0 / n)))
        phase = rng.gen.uniform(0, 2 * math.pi) if attempt else 0.4
        z = radius * np.exp(1j * (phase + 2 * math.pi * np.arange(n) / n))
        if attempt:
            z *= 1 + 0.1 * rng.gen.standard_normal(n)
        for _ in range(sweeps):
            pv = np.polyval(c, z)
            dv = np.polyval(dc, z)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = pv / dv
                diff = z[:, None] - z[None, :]
                np.fill_diagonal(diff, 1.0)
                inv = 1.0 / diff
                np.fill_diagonal(inv, 0.0)
                corr = ratio / (1.0 - ratio * inv.sum(axis=1))
            if not np.all(np.isfinite(corr)):
                break
            z = z - corr
            if np.max(np.abs(corr) / np.maximum(1.0, np.abs(z))) <= tol:
                # Newton polish
                for _ in range(3):
                    dv = np.polyval(dc, z)
                    step = np.where(dv != 0, np.polyval(c, z) / np.where(dv != 0, dv, 1), 0)
                    z = z - step
                return [complex(x) for x in z]
    raise ConvergenceError(f"Aberth iteration did not converge for degree {n}")


def complex_roots(
    p: IntPolynomial, rng: RandomSource | None = None, tol: float = 1e-10, sweeps: int = 200
) -> list[complex]:
    """All complex roots with multiplicity; integer roots are removed exactly first."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    rng = rng or RandomSource(0)
    roots: list[complex] = []
    for r in range(0, p.degree + 1):
        while p.degree > 0:
            q, rem = p.divmod_linear(r)
            if rem:
                break
            roots.append(complex(r))
            p = q
    for f, mult in squarefree_decomposition(p):
        if f.degree == 1:
            rs = [complex(-f[0] / f[1])]
        else:
            rs = _aberth(f, rng, tol, sweeps)
        roots += rs * mult
    return sorted(roots, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def log_abs_complex(re: Fraction, im: Fraction) -> float:
    """log |re + i im| for exact rationals without overflow."""
    sq = re * re + im * im
    if sq == 0:
        raise ValueError("log of zero")
    return 0.5 * (math.log(sq.numerator) - math.log(sq.denominator))
