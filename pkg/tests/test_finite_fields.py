import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ellsurf.exact_algebra import Poly
from ellsurf.finite_fields import (ExtField, PrimeField, factor_fp, is_irreducible_fp, legendre,
                                   quadratic_character, smallest_irreducible, sqrt_mod_prime)
from ellsurf.weierstrass import WeierstrassModel

PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 101, 1009]


@pytest.mark.parametrize("p", PRIMES)
def test_legendre_matches_sympy(p):
    for a in range(1, min(p, 200)):
        assert legendre(a, p) == sympy.legendre_symbol(a, p)
    assert legendre(0, p) == 0


@pytest.mark.parametrize("p", PRIMES)
def test_tonelli_shanks_roots(p):
    for a in range(min(p, 300)):
        r = sqrt_mod_prime(a, p)
        if legendre(a, p) == -1:
            assert r is None
        else:
            assert r * r % p == a % p


@pytest.mark.parametrize("p,m", [(3, 2), (5, 3), (7, 2), (17, 2), (3, 5)])
def test_extension_field_axioms(p, m):
    F = ExtField(p, m)
    rng = random.Random(p * m)
    for _ in range(200):
        a, b, c = (F.element(rng.randrange(F.q)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if a:
            assert a * a.inverse() == F.one
        assert a ** F.q == a


@pytest.mark.parametrize("p,m", [(3, 2), (5, 2), (7, 3), (11, 2), (13, 2)])
def test_character_multiplicative_exhaustive(p, m):
    F = ExtField(p, m)
    els = list(F.elements())
    chi = {x.v: F.character(x) for x in els}
    for a in els:
        for b in els[:: max(1, len(els) // 40)]:
            assert chi[(a * b).v] == chi[a.v] * chi[b.v]
    assert sum(chi.values()) == 0
    assert sum(1 for v in chi.values() if v == 1) == (F.q - 1) // 2


@settings(max_examples=300)
@given(st.sampled_from([(3, 3), (5, 2), (7, 2), (17, 2), (19, 3)]), st.integers(0, 10 ** 9), st.integers(0, 10 ** 9))
def test_character_multiplicative_property(pm, i, j):
    F = ExtField(*pm)
    a, b = F.element(i % F.q), F.element(j % F.q)
    assert quadratic_character(a * b) == quadratic_character(a) * quadratic_character(b)


@pytest.mark.parametrize("p,m", [(5, 2), (7, 3), (17, 2)])
def test_sqrt_and_tables_agree(p, m):
    F = ExtField(p, m)
    tab = F.tables
    for x in F.elements():
        r = F.sqrt(x)
        assert (r is not None) == (F.character(x) >= 0)
        if r is not None:
            assert r * r == x
        assert tab.chi[x.v] == F.character(x)


@pytest.mark.parametrize("p,m", [(3, 4), (5, 3), (7, 2), (13, 3)])
def test_smallest_irreducible_against_sympy(p, m):
    f = smallest_irreducible(p, m)
    x = sympy.Symbol("x")
    expr = sum(int(c) * x ** k for k, c in enumerate(f.c))
    assert sympy.Poly(expr, x, modulus=p).is_irreducible
    assert is_irreducible_fp(f)


def test_factor_fp_product():
    F = PrimeField(7)
    f = Poly(F, [1, 2, 3, 4, 5, 6, 1]) * Poly(F, [3, 1]) ** 2
    prod = Poly.constant(F, f.lc)
    for g, m in factor_fp(f):
        assert is_irreducible_fp(g)
        prod = prod * g ** m
    assert prod == f


def _random_point(E, F, rng):
    """A random affine point of a general Weierstrass model over F_p (p odd)."""
    a1, a2, a3, a4, a6 = E.a
    while True:
        x = F(rng.randrange(F.p))
        b = a1 * x + a3
        c = x * x * x + a2 * x * x + a4 * x + a6
        d = F.sqrt(b * b + 4 * c)
        if d is not None:
            return E.point(x, (d - b) / 2)


def _random_curve(p, rng):
    F = PrimeField(p)
    while True:
        try:
            return F, WeierstrassModel(F, *(rng.randrange(p) for _ in range(5)))
        except ValueError:
            continue


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([5, 7, 11, 13, 101, 1009]), st.integers(0, 2 ** 32))
def test_group_law_associative_property(p, seed):
    rng = random.Random(seed)
    F, E = _random_curve(p, rng)
    P, Q, R = (_random_point(E, F, rng) for _ in range(3))
    assert E.add(E.add(P, Q), R) == E.add(P, E.add(Q, R))
    assert E.add(P, Q) == E.add(Q, P)
    assert E.add(P, E.neg(P)).is_infinity


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_group_order_annihilates(p):
    """#E(F_p) counted by brute force kills every point."""
    rng = random.Random(p)
    F, E = _random_curve(p, rng)
    a1, a2, a3, a4, a6 = (int(c) for c in E.a)
    n = 1 + sum(1 for x in range(p) for y in range(p)
                if (y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)) % p == 0)
    for _ in range(10):
        P = _random_point(E, F, rng)
        assert E.scalar_mul(n, P).is_infinity
        assert E.scalar_mul(5, P) == E.add(E.add(E.add(E.add(P, P), P), P), P)
