"""Polynomials with big-integer coefficients, ascending degree."""

from __future__ import annotations

import json
from math import gcd, lcm
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def _trim(c: Sequence) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPolynomial:
    coefficients: tuple[int, ...]

    def __init__(self, coefficients: Iterable[int]):
        cs = _trim(int(c) for c in coefficients)
        object.__setattr__(self, "coefficients", cs)

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPolynomial":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPolynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def is_zero(self) -> bool:
        return not self.coefficients

    def __getitem__(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        return IntPolynomial(self[i] + other[i] for i in range(n))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coefficients)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coefficients)
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return IntPolynomial([])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPolynomial":
        out, base = IntPolynomial([1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by x^k."""
        return IntPolynomial([0] * k + list(self.coefficients)) if self.coefficients else self

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(i * c for i, c in enumerate(self.coefficients) if i)

    def __call__(self, x):
        """Horner evaluation; exact for int, Fraction and (re, im) rational pairs via ``eval_complex``."""
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def eval_complex(self, re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
        """Exact value at re + i·im as a pair of rationals."""
        ar, ai = Fraction(0), Fraction(0)
        for c in reversed(self.coefficients):
            ar, ai = ar * re - ai * im + c, ar * im + ai * re
        return ar, ai

    def divmod_linear(self, r: int) -> tuple["IntPolynomial", int]:
        """Synthetic division by (x - r)."""
        cs = self.coefficients
        if not cs:
            return self, 0
        out = [0] * (len(cs) - 1)
        acc = 0
        for i in range(len(cs) - 1, 0, -1):
            acc = acc * r + cs[i]
            out[i - 1] = acc
        return IntPolynomial(out), acc * r + cs[0]

    def power_sums(self, kmax: int) -> list[Fraction]:
        """p_k = sum of k-th powers of the roots (with multiplicity), k = 0..kmax, by Newton's identities."""
        n = self.degree
        if n < 0:
            raise ValueError("zero polynomial")
        lead = Fraction(self.leading)
        # e-style coefficients: a_j = coeff of x^(n-j) / lead
        a = [Fraction(self[n - j]) / lead if j <= n else Fraction(0) for j in range(kmax + 1)]
        p = [Fraction(n)] + [Fraction(0)] * kmax
        for k in range(1, kmax + 1):
            s = -k * a[k] if k <= n else Fraction(0)
            for j in range(1, k):
                s -= a[j] * p[k - j]
            p[k] = s
        return p

    def to_json(self) -> str:
        return json.dumps([str(c) for c in self.coefficients])

    @classmethod
    def from_json(cls, text: str) -> "IntPolynomial":
        return cls(int(s) for s in json.loads(text))

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self[k]
            if c == 0:
                continue
            mag = abs(c)
            body = "" if (mag == 1 and k) else str(mag)
            if k:
                body += "x" if k == 1 else f"x^{k}"
            terms.append(("-" if c < 0 else "+", body))
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {s} {b}" for s, b in terms[1:])


# -- rational helpers (for gcd / square-free work) ---------------------------------
def _to_frac(p: IntPolynomial) -> list[Fraction]:
    return [Fraction(c) for c in p.coefficients]


def _frac_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lb = b[-1]
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        f = a[-1] / lb
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return q, a


def primitive(cs: Sequence[Fraction], positive_lead: bool = False) -> IntPolynomial:
    """Scale rational coefficients to coprime integers (sign kept unless ``positive_lead``)."""
    cs = [Fraction(c) for c in cs]
    if not any(cs):
        return IntPolynomial([])
    den = 1
    for c in cs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if positive_lead and ints[-1] < 0:
        ints = [-c for c in ints]
    return IntPolynomial(ints)


def _monic_gcd(x: list[Fraction], y: list[Fraction]) -> list[Fraction]:
    while y:
        _, r = _frac_divmod(x, y)
        x, y = y, r
    return [c / x[-1] for c in x]


def _deriv(a: list[Fraction]) -> list[Fraction]:
    return [i * c for i, c in enumerate(a) if i]


def _sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _div(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    q, r = _frac_divmod(a, b)
    if r:
        raise ArithmeticError("division is not exact")
    return q


def poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    return primitive(_monic_gcd(_to_frac(a), _to_frac(b)), positive_lead=True)


def squarefree_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm: p = c * prod f_i^i with each f_i square-free and pairwise coprime."""
    if p.degree < 1:
        return []
    f = _to_frac(p)
    df = _deriv(f)
    a = _monic_gcd(f, df)
    b = _div(f, a)
    c = _div(df, a)
    d = _sub(c, _deriv(b))
    out = []
    i = 1
    while len(b) > 1:
        g = _monic_gcd(b, d) if d else [c_ / b[-1] for c_ in b]
        if len(g) > 1:
            out.append((primitive(g, positive_lead=True), i))
        b = _div(b, g)
        c = _div(d, g) if d else []
        d = _sub(c, _deriv(b))
        i += 1
    return out
