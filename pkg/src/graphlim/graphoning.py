"""Cantor-type difference sets on [0,1], their gauge functions and kernel sampling.

Points are finite digit vectors.  Every set here is described block by block:
block i is read as one number in radix ``gamma_i`` and must be a multiple of
``(gamma_i - 1) / (delta_i - 1)``, leaving ``delta_i`` admissible values.
For the binary kinds a block of ``b`` bits has gamma = 2^b, delta = 2, so the
rule says the block is constant.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .config import CapExceeded, ConvergenceError, caps
from .graph_core import AdmissiblePair, Graph, RandomSource, as_rng

DEFAULT_DEPTH = 128


# -- gauge functions -----------------------------------------------------------
@dataclass(frozen=True)
class GaugeFunction:
    kind: str  # cube | proj | mixed_radix | constant
    gammas: tuple[int, ...] = ()
    deltas: tuple[int, ...] = ()
    value: Fraction = Fraction(0)  # for kind="constant"
    custom: Callable[[float], float] | None = field(default=None, compare=False)

    @classmethod
    def cube(cls) -> "GaugeFunction":
        return cls("cube")

    @classmethod
    def proj(cls) -> "GaugeFunction":
        return cls("proj")

    @classmethod
    def constant(cls, c) -> "GaugeFunction":
        return cls("constant", value=Fraction(c))

    @classmethod
    def mixed_radix(cls, gammas: Sequence[int], deltas: Sequence[int], h=None) -> "GaugeFunction":
        g = cls("mixed_radix", tuple(int(x) for x in gammas), tuple(int(x) for x in deltas), custom=h)
        g.validate()
        return g

    def validate(self) -> None:
        if self.kind not in ("cube", "proj", "mixed_radix", "constant"):
            raise ValueError(f"unknown gauge kind {self.kind!r}")
        if self.kind != "mixed_radix":
            return
        if not self.gammas or len(self.gammas) != len(self.deltas):
            raise ValueError("gamma and delta sequences must be non-empty and of equal length")
        for i, (g, d) in enumerate(zip(self.gammas, self.deltas)):
            if not g >= d > 1:
                raise ValueError(f"position {i}: need gamma >= delta > 1, got {g}, {d}")
            if (g - 1) % (d - 1):
                raise ValueError(f"position {i}: delta - 1 = {d - 1} does not divide gamma - 1 = {g - 1}")

    def _step(self, x: Fraction) -> Fraction:
        """Step gauge for mixed radix: 1/(delta_1..delta_n) on [1/(gamma_1..gamma_n), 1/(gamma_1..gamma_{n-1}))."""
        if x <= 0:
            return Fraction(0)
        G, D = Fraction(1), Fraction(1)
        for g, d in zip(self.gammas, self.deltas):
            if x >= 1 / G / g:
                return 1 / D / d if x < 1 / G else 1 / D
            G *= g
            D *= d
        return 1 / D

    def exact(self, x: Fraction) -> Fraction | None:
        """Exact h(x) when it is rational, else None."""
        x = Fraction(x)
        if x <= 0:
            return Fraction(0)
        if self.kind == "constant":
            return self.value
        if self.kind == "mixed_radix":
            return None if self.custom else self._step(x)
        if self.kind == "cube":
            inv = 1 / x
            if inv.denominator == 1 and inv.numerator & (inv.numerator - 1) == 0 and inv.numerator > 1:
                return Fraction(1, inv.numerator.bit_length() - 1)
            return None
        y = 2 * x
        rn, rd = math.isqrt(y.numerator), math.isqrt(y.denominator)
        if rn * rn == y.numerator and rd * rd == y.denominator:
            return Fraction(rn, rd)
        return None

    def extended(self, x: Fraction, digits: int = 60) -> Decimal:
        ex = self.exact(x)
        with localcontext() as ctx:
            ctx.prec = digits
            if ex is not None:
                return Decimal(ex.numerator) / Decimal(ex.denominator)
            dx = Decimal(Fraction(x).numerator) / Decimal(Fraction(x).denominator)
            if self.kind == "cube":
                return Decimal(1) / ((Decimal(1) / dx).ln() / Decimal(2).ln())
            if self.kind == "proj":
                return (2 * dx).sqrt()
            return Decimal(repr(self.custom(float(x))))

    def __call__(self, x: float) -> float:
        if x <= 0:
            return 0.0
        if self.kind == "cube":
            if x >= 1:
                raise ValueError("cube gauge is defined on (0, 1)")
            return 1.0 / math.log2(1.0 / x)
        if self.kind == "proj":
            return math.sqrt(2.0 * x)
        if self.kind == "constant":
            return float(self.value)
        if self.custom is not None:
            return float(self.custom(x))
        return float(self._step(Fraction(x)))

    def describe(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "mixed_radix":
            d |= {"gammas": list(self.gammas), "deltas": list(self.deltas)}
        if self.kind == "constant":
            d["value"] = str(self.value)
        return d


# -- set descriptions ------------------------------------------------------------
@dataclass(frozen=True)
class Block:
    start: int  # first digit position
    length: int  # number of digit positions
    gamma: int  # radix of the whole block
    delta: int  # admissible values

    @property
    def divisor(self) -> int:
        return (self.gamma - 1) // (self.delta - 1)


@dataclass(frozen=True)
class CantorSpec:
    kind: str
    gauge: GaugeFunction

    def _length(self, i: int) -> int:
        if self.kind == "cube":
            return 2 if i == 0 else 2**i
        if self.kind == "proj":
            return 3 if i == 0 else 2
        return 1

    def block_lengths(self, count: int) -> list[int]:
        if self.kind == "mixed_radix":
            count = min(count, len(self.gauge.gammas))
        return [self._length(i) for i in range(count)]

    def blocks(self, depth: int) -> list[Block]:
        """Blocks overlapping the first ``depth`` positions (the last may be incomplete)."""
        out, pos, i = [], 0, 0
        while pos < depth:
            if self.kind == "mixed_radix":
                if i >= len(self.gauge.gammas):
                    raise ValueError(f"depth {depth} exceeds the supplied sequences")
                out.append(Block(pos, 1, self.gauge.gammas[i], self.gauge.deltas[i]))
                pos += 1
            else:
                b = self._length(i)
                out.append(Block(pos, b, 2**b, 2))
                pos += b
            i += 1
        return out

    def complete_blocks(self, depth: int) -> list[Block]:
        return [b for b in self.blocks(depth) if b.start + b.length <= depth]

    def radices(self, depth: int) -> np.ndarray:
        if self.kind == "mixed_radix":
            return np.array(self.gauge.gammas[:depth], dtype=np.int64)
        return np.full(depth, 2, dtype=np.int64)

    def describe(self) -> dict:
        return {"kind": self.kind, "gauge": self.gauge.describe()}


def block_structure(g: GaugeFunction) -> CantorSpec:
    g.validate()
    if g.kind == "constant":
        raise ValueError("a constant gauge has no Cantor set")
    return CantorSpec(g.kind, g)


# -- points -------------------------------------------------------------------
@dataclass(frozen=True)
class DigitPoint:
    digits: tuple[int, ...]
    radices: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) != len(self.radices):
            raise ValueError("digits and radices differ in length")
        if any(not 0 <= a < r for a, r in zip(self.digits, self.radices)):
            raise ValueError("digit outside its radix")

    @property
    def depth(self) -> int:
        return len(self.digits)

    def value(self) -> Fraction:
        v, scale = Fraction(0), Fraction(1)
        for a, r in zip(self.digits, self.radices):
            scale /= r
            v += a * scale
        return v

    def complement(self) -> "DigitPoint":
        return DigitPoint(tuple(r - 1 - a for a, r in zip(self.digits, self.radices)), self.radices)

    @classmethod
    def from_fraction(cls, x: Fraction, radices: Sequence[int]) -> "DigitPoint":
        x = Fraction(x)
        if not 0 <= x < 1:
            raise ValueError("point must lie in [0, 1)")
        digits = []
        for r in radices:
            x *= r
            a = int(x)
            digits.append(a)
            x -= a
        return cls(tuple(digits), tuple(int(r) for r in radices))

    def serialize(self) -> str:
        if len(set(self.radices)) <= 1:
            r = self.radices[0] if self.radices else 2
            sep = "" if r <= 10 else ","
            return f"r{r}:" + sep.join(str(a) for a in self.digits)
        return "r" + ",".join(map(str, self.radices)) + ":" + ",".join(map(str, self.digits))

    @classmethod
    def parse(cls, text: str) -> "DigitPoint":
        head, body = text.split(":", 1)
        rad = [int(s) for s in head[1:].split(",")]
        digs = [int(s) for s in (body.split(",") if "," in body else list(body))] if body else []
        if len(rad) == 1:
            rad = rad * len(digs)
        return cls(tuple(digs), tuple(rad))

    def as_array(self) -> np.ndarray:
        return np.array([self.digits], dtype=np.int64)


def _need_blocks(spec: CantorSpec, depth: int, minimum: int) -> list[Block]:
    blocks = spec.complete_blocks(depth)
    if len(blocks) < minimum:
        raise ValueError(f"depth {depth} covers {len(blocks)} complete blocks, need >= {minimum}")
    return blocks


def is_member_batch(X: np.ndarray, spec: CantorSpec, blocks: Sequence[Block] | None = None) -> np.ndarray:
    """Row-wise membership of digit arrays; the trailing incomplete block is ignored."""
    depth = X.shape[1]
    blocks = spec.complete_blocks(depth) if blocks is None else blocks
    ok = np.ones(X.shape[0], dtype=bool)
    for b in blocks:
        seg = X[:, b.start : b.start + b.length]
        if b.length == 1:
            ok &= seg[:, 0] % b.divisor == 0
        else:
            ok &= seg.min(axis=1) == seg.max(axis=1)
    return ok


def is_member(x: DigitPoint, spec: CantorSpec) -> bool:
    blocks = _need_blocks(spec, x.depth, 2)
    for b in blocks:
        v = 0
        for j in range(b.start, b.start + b.length):
            v = v * x.radices[j] + x.digits[j]
        if v % b.divisor:
            return False
    return True


def sample_S_batch(spec: CantorSpec, rng: RandomSource, depth: int, n: int) -> np.ndarray:
    """n points of S as digit rows: one uniform admissible value per block."""
    X = np.zeros((n, depth), dtype=np.int64)
    gen = rng.gen
    for b in spec.blocks(depth):
        k = gen.integers(0, b.delta, size=n)
        stop = min(b.start + b.length, depth)
        if b.length == 1:
            X[:, b.start] = k * b.divisor
        else:
            X[:, b.start : stop] = k[:, None]  # binary block: all zeros or all ones
    return X


def sample_S(spec: CantorSpec, rng, depth: int = DEFAULT_DEPTH) -> DigitPoint:
    rng = as_rng(rng)
    row = sample_S_batch(spec, rng, depth, 1)[0]
    return DigitPoint(tuple(int(a) for a in row), tuple(int(r) for r in spec.radices(depth)))


def add_batch(X: np.ndarray, Y: np.ndarray, radices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Digit-wise X + Y; returns (sum mod 1, carry out of the top position)."""
    out = np.empty_like(X)
    carry = np.zeros(X.shape[0], dtype=np.int64)
    for j in range(X.shape[1] - 1, -1, -1):
        s = X[:, j] + Y[:, j] + carry
        out[:, j] = s % radices[j]
        carry = s // radices[j]
    return out, carry


def sub_batch(X: np.ndarray, Y: np.ndarray, radices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Digit-wise X - Y; returns (difference mod 1, borrow out of the top position)."""
    out = np.empty_like(X)
    borrow = np.zeros(X.shape[0], dtype=np.int64)
    for j in range(X.shape[1] - 1, -1, -1):
        s = X[:, j] - Y[:, j] - borrow
        neg = s < 0
        out[:, j] = np.where(neg, s + radices[j], s)
        borrow = neg.astype(np.int64)
    return out, borrow


def abs_diff_batch(X: np.ndarray, Y: np.ndarray, radices: np.ndarray) -> np.ndarray:
    d, borrow = sub_batch(X, Y, radices)
    e, _ = sub_batch(Y, X, radices)
    return np.where(borrow[:, None] == 1, e, d)


_MAX_REDRAWS = 10_000


def kernel_sample_batch(X: np.ndarray, spec: CantorSpec, rng: RandomSource) -> np.ndarray:
    """For each row x a point y with |x - y| in S.

    Draw s from S and keep whichever of x + s, x - s stays in [0, 1); a fair
    coin decides when both do, and s is redrawn when neither does.
    """
    n, depth = X.shape
    radices = spec.radices(depth)
    Y = np.empty_like(X)
    todo = np.arange(n)
    for _ in range(_MAX_REDRAWS):
        if not len(todo):
            return Y
        S = sample_S_batch(spec, rng, depth, len(todo))
        plus, carry = add_batch(X[todo], S, radices)
        minus, borrow = sub_batch(X[todo], S, radices)
        ok_p, ok_m = carry == 0, borrow == 0
        coin = rng.gen.integers(0, 2, size=len(todo)).astype(bool)
        take_p = ok_p & (~ok_m | coin)
        take_m = ok_m & ~take_p
        Y[todo[take_p]] = plus[take_p]
        Y[todo[take_m]] = minus[take_m]
        todo = todo[~(take_p | take_m)]
    raise ConvergenceError("kernel sampling kept drawing infeasible translates")


def kernel_sample(x: DigitPoint, spec: CantorSpec, rng, depth: int | None = None) -> DigitPoint:
    rng = as_rng(rng)
    depth = x.depth if depth is None else depth
    if depth != x.depth:
        x = DigitPoint.from_fraction(x.value(), spec.radices(depth))
    row = kernel_sample_batch(x.as_array(), spec, rng)[0]
    return DigitPoint(tuple(int(a) for a in row), x.radices)


# -- Monte Carlo tree densities ------------------------------------------------
@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    stderr: float
    samples: int
    per_worker: tuple[int, ...] = ()
    meta: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> str:
        doc = {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "samples": self.samples,
            "per_worker": list(self.per_worker),
            **self.meta,
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _tree_children(F: Graph, o: int) -> dict[int, list[int]]:
    kids: dict[int, list[int]] = {o: []}
    order = [o]
    for v in order:
        for u in F.adj[v]:
            if u not in kids:
                kids[u] = []
                kids[v].append(u)
                order.append(u)
    return kids


def _tree_values(F: Graph, o: int, spec: CantorSpec, X: np.ndarray, rng: RandomSource, alpha: float) -> np.ndarray:
    """Indicator per row that every edge of the tree was accepted."""
    kids = _tree_children(F, o)
    alive = np.ones(X.shape[0], dtype=bool)
    stack = [(o, X)]
    while stack:
        v, P = stack.pop()
        for c in kids[v]:
            if alpha < 1.0:
                alive &= rng.gen.random(X.shape[0]) < alpha
            stack.append((c, kernel_sample_batch(P, spec, rng)))
    return alive.astype(float)


def mc_rooted_tree_density(
    F: Graph,
    o: int,
    spec: CantorSpec,
    x: DigitPoint,
    N: int,
    rng,
    alpha: float = 1.0,
    workers: int = 1,
) -> MCEstimate:
    """Monte Carlo rooted density of a tree at x; each edge draws one kernel step.

    With ``alpha < 1`` every step is accepted with probability alpha, which
    targets alpha^e(F).
    """
    if not (F.is_connected() and F.num_edges == F.n - 1):
        raise ValueError("rooted Monte Carlo densities need a tree pattern")
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    rng = as_rng(rng)
    workers = max(1, int(workers))
    streams = rng.fork(workers)
    counts = [N // workers + (1 if i < N % workers else 0) for i in range(workers)]
    base = x.as_array()

    def run(i: int) -> np.ndarray:
        if counts[i] == 0:
            return np.zeros(0)
        X = np.repeat(base, counts[i], axis=0)
        return _tree_values(F, o, spec, X, streams[i], alpha)

    if workers == 1:
        parts = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(run, range(workers)))
    vals = np.concatenate(parts) if parts else np.zeros(0)
    est = float(vals.mean()) if len(vals) else float("nan")
    se = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
    return MCEstimate(
        est,
        se,
        len(vals),
        tuple(counts),
        {"spec": spec.describe(), "depth": x.depth, "alpha": alpha, "pattern_edges": F.num_edges},
    )


# -- acyclicity ------------------------------------------------------------------
@dataclass(frozen=True)
class AcyclicityResult:
    k: int
    hits: int
    trials: int
    depth: int
    complete_blocks: int
    random_pass_probability: float  # chance a uniformly random digit string passes every complete block

    @property
    def hit_fraction(self) -> float:
        return self.hits / self.trials if self.trials else float("nan")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "hits": self.hits,
            "trials": self.trials,
            "depth": self.depth,
            "complete_blocks": self.complete_blocks,
            "hit_fraction": self.hit_fraction,
            "random_pass_probability": self.random_pass_probability,
        }


def acyclicity_test(
    spec: CantorSpec, k: int, N: int, depth: int = DEFAULT_DEPTH, rng=0, min_blocks: int = 6
) -> AcyclicityResult:
    """Fraction of trials where the mod-1 sum of k points of S lands in S."""
    if k < 1:
        raise ValueError("k must be >= 1")
    blocks = _need_blocks(spec, depth, min_blocks)
    rng = as_rng(rng)
    radices = spec.radices(depth)
    acc = sample_S_batch(spec, rng, depth, N)
    for _ in range(k - 1):
        acc, _carry = add_batch(acc, sample_S_batch(spec, rng, depth, N), radices)
    hits = int(is_member_batch(acc, spec, blocks).sum())
    p = math.prod(b.delta / b.gamma for b in blocks)
    return AcyclicityResult(k, hits, N, depth, len(blocks), p)


# -- covering sums and growth --------------------------------------------------
def covering_sum(spec: CantorSpec, g: GaugeFunction, n: int) -> Fraction | Decimal:
    """Sum of h(diam) over the level-n intervals: prod(delta) * h(1 / prod(gamma))."""
    if n > caps().covering_level:
        raise CapExceeded(f"covering level {n} exceeds cap {caps().covering_level}")
    if n < 1:
        raise ValueError("level must be >= 1")
    if spec.kind == "mixed_radix":
        if n > len(spec.gauge.gammas):
            raise ValueError("level exceeds the supplied sequences")
        count = math.prod(spec.gauge.deltas[:n])
        diam = Fraction(1, math.prod(spec.gauge.gammas[:n]))
    else:
        bits = sum(spec.block_lengths(n))
        count = 2**n
        diam = Fraction(1, 2**bits)
    ex = g.exact(diam)
    if ex is not None:
        return count * ex
    with localcontext() as ctx:
        ctx.prec = 60
        return count * g.extended(diam)


def validate_mixed_radix(g: GaugeFunction, levels: int | None = None) -> dict:
    """Side conditions on user sequences: divisibility, growth trends and the covering bound."""
    g.validate()
    if g.kind != "mixed_radix":
        raise ValueError("not a mixed-radix gauge")
    spec = block_structure(g)
    levels = min(levels or len(g.gammas), len(g.gammas), caps().covering_level)
    ds, gs = g.deltas, g.gammas
    bound_ok = []
    for n in range(1, levels + 1):
        s = covering_sum(spec, g, n)
        bound_ok.append(abs(float(s) - 1.0) < 2.0**-n)
    return {
        "divisibility": True,
        "delta_nondecreasing": all(b >= a for a, b in zip(ds, ds[1:])),
        "ratio_nondecreasing": all(gs[i + 1] * ds[i] >= gs[i] * ds[i + 1] for i in range(len(ds) - 1)),
        "covering_bound": bound_ok,
    }


def gauge_growth_check(g: GaugeFunction, seq: Sequence[AdmissiblePair]) -> list[float]:
    """h(1/v(G_n)) * d_n along a sequence with strictly increasing sizes."""
    sizes = [pr.graph.n for pr in seq]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("vertex counts must be strictly increasing")
    out = []
    for pr, v in zip(seq, sizes):
        ex = g.exact(Fraction(1, v))
        out.append(float(ex * Fraction(pr.d)) if ex is not None else g(1.0 / v) * float(pr.d))
    return out
