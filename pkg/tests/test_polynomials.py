import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphlim.config import InvariantViolation
from graphlim.polynomials.intpoly import IntPolynomial, poly_gcd, squarefree_decomposition
from graphlim.polynomials.roots import RootMeasure, complex_roots, real_roots, sturm_chain

coeffs = st.lists(st.integers(-20, 20), min_size=1, max_size=7)
small_roots = st.lists(st.integers(-5, 5), min_size=1, max_size=7)


@given(coeffs, coeffs, st.integers(-6, 6))
def test_ring_operations_evaluate_pointwise(a, b, x):
    p, q = IntPolynomial(a), IntPolynomial(b)
    assert (p + q)(x) == p(x) + q(x)
    assert (p - q)(x) == p(x) - q(x)
    assert (p * q)(x) == p(x) * q(x)
    assert (p**2)(x) == p(x) ** 2


@given(coeffs)
def test_json_round_trip(a):
    p = IntPolynomial(a)
    assert IntPolynomial.from_json(p.to_json()) == p


def test_trimming_and_degree():
    p = IntPolynomial([1, 2, 0, 0])
    assert p.degree == 1 and p.leading == 2
    assert IntPolynomial([0]).is_zero()


@given(coeffs, st.integers(-5, 5))
def test_divmod_linear(a, r):
    p = IntPolynomial(a)
    q, rem = p.divmod_linear(r)
    assert rem == p(r)
    assert q * IntPolynomial([-r, 1]) + IntPolynomial([rem]) == p


@given(coeffs)
def test_derivative(a):
    p = IntPolynomial(a)
    dp = p.derivative()
    assert all(dp[k] == (k + 1) * p[k + 1] for k in range(max(p.degree, 0)))


@given(small_roots)
def test_power_sums_match_roots(rs):
    p = IntPolynomial.from_roots(rs)
    ps = p.power_sums(6)
    for k in range(7):
        assert ps[k] == sum(Fraction(r) ** k for r in rs)


@given(small_roots, small_roots)
def test_gcd_of_products(a, b):
    g = poly_gcd(IntPolynomial.from_roots(a), IntPolynomial.from_roots(b))
    common = sorted((set(a) & set(b)))
    # every common root is a root of the gcd
    assert all(g(r) == 0 for r in common)
    assert g.degree >= len(common)


@given(small_roots)
def test_squarefree_decomposition(rs):
    p = IntPolynomial.from_roots(rs)
    parts = squarefree_decomposition(p)
    prod = IntPolynomial([1])
    for f, m in parts:
        prod = prod * f**m
    assert prod.degree == p.degree
    # product agrees with p up to a constant
    assert all(prod[k] * p.leading == p[k] * prod.leading for k in range(p.degree + 1))
    for r in set(rs):
        mult = rs.count(r)
        assert any(f(r) == 0 and m == mult for f, m in parts)


def test_real_roots_examples():
    r = real_roots(IntPolynomial([0, -3, 0, 1])).roots
    assert np.allclose(r, [-math.sqrt(3), 0, math.sqrt(3)], atol=1e-12)
    r = real_roots(IntPolynomial([1, 0, -3, 0, 1])).roots
    phi = (1 + math.sqrt(5)) / 2
    assert np.allclose(r, [-phi, -1 / phi, 1 / phi, phi], atol=1e-12)
    assert real_roots(IntPolynomial.monomial(5)).roots == (0.0,) * 5


@given(small_roots)
def test_real_roots_recover_integer_roots(rs):
    r = real_roots(IntPolynomial.from_roots(rs)).roots
    assert np.allclose(r, sorted(rs), atol=1e-9)


def test_real_roots_rejects_complex():
    with pytest.raises(InvariantViolation):
        real_roots(IntPolynomial([1, 0, 1]))


def test_sturm_chain_counts():
    p = IntPolynomial([0, -3, 0, 1])
    chain = sturm_chain(p)
    assert chain[0] == p and chain[1] == p.derivative()


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=9).filter(lambda c: c[-1] != 0))
def test_complex_roots_reconstruct(c):
    p = IntPolynomial(c)
    rs = complex_roots(p)
    assert len(rs) == p.degree
    assert np.allclose(np.poly(rs)[::-1] * p.leading, c, atol=1e-6 * max(map(abs, c)))


def test_complex_roots_multiplicities():
    p = IntPolynomial.from_roots([1, 1, 2]) * IntPolynomial([1, 0, 1]) ** 2
    rs = complex_roots(p)
    assert sum(1 for z in rs if abs(z - 1j) < 1e-8) == 2
    assert sum(1 for z in rs if abs(z - 1) < 1e-12) == 2


def test_root_measure():
    m = RootMeasure((1.0, -1.0, 0.0))
    assert m.weight == pytest.approx(1 / 3)
    assert m.moment(2) == pytest.approx(2 / 3)
    assert m.to_csv().splitlines()[0] == "# kind="
