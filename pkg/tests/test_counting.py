import random

import pytest

from conftest import FIXTURES, model
from ellsurf.counting import (NAIVE_LIMIT, SurfaceCounter, bsgs_order, extend_trace, fiber_trace,
                              naive_oracle_count, surface_count)
from ellsurf.finite_fields import ExtField
from ellsurf.kodaira import verify_good_reduction
from ellsurf.weierstrass import WeierstrassModel, reduce_mod_p

SMALL_PRIMES = [5, 7, 11, 13]


def _good_small_primes(name):
    return [p for p in SMALL_PRIMES if verify_good_reduction(model(name), p)[0]]


def test_naive_limit_admits_p13_m2():
    assert 13 ** 2 + 1 <= NAIVE_LIMIT


@pytest.mark.parametrize("name", FIXTURES)
def test_orbit_counts_match_naive(name):
    primes = _good_small_primes(name)
    assert primes
    for p in primes:
        C = SurfaceCounter(reduce_mod_p(model(name), p))
        for m in (1, 2):
            assert C.count(m) == naive_oracle_count(C.model, m)


@pytest.mark.parametrize("name", ["E1", "E2p"])
def test_orbits_vs_full_enumeration(name):
    C = SurfaceCounter(reduce_mod_p(model(name), 11))
    for m in (1, 2, 3):
        assert C.count(m) == C.count(m, use_orbits=False)


def test_strategies_agree():
    R = reduce_mod_p(model("E1pp"), 11)
    a = SurfaceCounter(R, strategy="char-sum").trace_vector(2)
    b = SurfaceCounter(R, strategy="bsgs").trace_vector(2)
    assert a.counts == b.counts


def test_threads_do_not_change_counts():
    R = reduce_mod_p(model("E2"), 13)
    assert surface_count(R, 2, threads=1).counts == surface_count(R, 2, threads=4).counts


def test_extension_degree_matches_higher_levels():
    R = reduce_mod_p(model("E1pp"), 7)
    C = SurfaceCounter(R)
    assert C.trace_vector(2, r=2).counts == (C.count(2), C.count(4))


def _brute_points(p, m, coeffs):
    F = ExtField(p, m)
    a2, a4, a6 = (F(c) for c in coeffs)
    n = 1
    for x in F.elements():
        n += 1 + F.character(x * x * x + a2 * x * x + a4 * x + a6)
    return n


@pytest.mark.parametrize("p", [5, 7, 13, 31])
def test_fiber_trace_and_extension(p):
    rng = random.Random(p)
    F = ExtField(p, 1)
    for _ in range(5):
        while True:
            cs = [rng.randrange(p) for _ in range(3)]
            try:
                E = WeierstrassModel(F, 0, cs[0], 0, cs[1], cs[2])
                break
            except ValueError:
                continue
        a = fiber_trace(E)
        assert p + 1 - a == _brute_points(p, 1, cs)
        assert p ** 2 + 1 - extend_trace(a, p, 2) == _brute_points(p, 2, cs)


def test_bsgs_order_against_direct():
    F = ExtField(1009, 1)
    E = WeierstrassModel(F, 0, 3, 0, 5, 7)
    assert bsgs_order(E) == F.q + 1 - fiber_trace(E)


def test_counter_requires_finite_field():
    with pytest.raises(Exception):
        SurfaceCounter(model("E1"))
