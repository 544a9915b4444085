from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import expected, model, section_model, spec
from ellsurf.exact_algebra import QQ, cyclotomic8, is_square, power_automorphism
from ellsurf.mordell_weil import (HeightPairing, MordellWeilError, RankStatement, combine, galois_rank_over_Q,
                                  gram_index_bound, halve, halving_discriminant, psi_nontrivial_cosets,
                                  rational_model, saturation_check, shioda_tate_rank, torsion_subgroup,
                                  twist_rank_additivity, two_descent_image)
from ellsurf.weierstrass import TwistCertificate, certify_twist

slow_ok = settings(max_examples=12, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])


@pytest.fixture(scope="module")
def hp2(e2):
    return HeightPairing(e2[0])


@pytest.fixture(scope="module")
def hp3(e3):
    return HeightPairing(e3[0])


def test_e2_heights(e2, hp2):
    m, secs, tors = e2
    want = expected("E2")["heights"]
    assert hp2.height(secs["P1"]) == Fraction(want["P1"])
    assert hp2.height(secs["P2"]) == Fraction(want["P2"])
    assert hp2.pair(secs["P1"], secs["P2"]) == 0
    extra = spec("E2").points("extra_points", m)["P"]
    assert hp2.height(extra) == Fraction(want["P"])
    assert all(hp2.height(T) == 0 for T in tors.values())


def test_e3_heights(e3, hp3):
    m, secs, _ = e3
    G = hp3.gram([secs["P1"], secs["P2"], secs["P3"]], scale=4)
    assert [list(r) for r in G.matrix] == expected("E3")["scaled_gram"]
    assert gram_index_bound(G) == (384, [1, 2, 4, 8])


def test_e1pp_height():
    m = model("E1pp")
    Q = spec("E1pp").points("sections", m)["Q"]
    assert HeightPairing(m).height(Q) == Fraction(expected("E1pp")["heights"]["Q"])


@slow_ok
@given(st.integers(-2, 2), st.integers(-2, 2))
def test_height_is_quadratic_form(e2, hp2, a, b):
    _, secs, tors = e2
    P = combine(e2[0], [a, b, 1], [secs["P1"], secs["P2"], tors["T1"]])
    assert hp2.height(P) == Fraction(a * a, 2) + b * b


@slow_ok
@given(st.sampled_from(["P1", "P2"]), st.sampled_from(["P1", "P2", "T2"]))
def test_pairing_bilinear_and_doubling(e2, hp2, n1, n2):
    m, secs, tors = e2
    pts = {**secs, **tors}
    P, Q = pts[n1], pts[n2]
    assert hp2.height(m.scalar_mul(2, P)) == 4 * hp2.height(P)
    R = m.add(P, Q)
    assert hp2.pair(R, secs["P2"]) == hp2.pair(P, secs["P2"]) + hp2.pair(Q, secs["P2"])
    assert hp2.pair(P, Q) == hp2.pair(Q, P)


@slow_ok
@given(st.sampled_from(["P1", "P2", "T1", "T2"]), st.sampled_from(["P1", "P2", "T1", "T2"]))
def test_descent_map_is_homomorphism(e2, n1, n2):
    m, secs, tors = e2
    pts = {**secs, **tors}
    P, Q = pts[n1], pts[n2]
    a1, b1 = two_descent_image(m, P)
    a2, b2 = two_descent_image(m, Q)
    a3, b3 = two_descent_image(m, m.add(P, Q))
    assert (a1 * a2, b1 * b2) == (a3, b3)


def test_descent_kills_doubles(e2):
    m, secs, _ = e2
    a, b = two_descent_image(m, m.scalar_mul(2, secs["P1"]))
    assert a.is_trivial("rational") and b.is_trivial("rational")


def test_halving(e2):
    m, secs, tors = e2
    ok, R = halve(m, m.scalar_mul(2, secs["P2"]))
    assert ok and R is not None and m.scalar_mul(2, R) == m.scalar_mul(2, secs["P2"])
    assert not halve(m, secs["P2"])[0]


def test_torsion_e2(e2):
    rep = torsion_subgroup(e2[0])
    assert rep.structure == (2, 4)
    assert e2[0].scalar_mul(4, e2[2]["T2"]).is_infinity
    assert not e2[0].scalar_mul(2, e2[2]["T2"]).is_infinity


def test_rational_torsion_e2():
    rep = torsion_subgroup(model("E2"), "rational")
    assert rep.structure == (2, 2)


def test_t1_halving_discriminant_not_square(e3):
    m, _, tors = e3
    T1 = tors["T1"]
    idx = [m.base.zero, m.roots[0], m.roots[1]].index(T1.x)
    d = halving_discriminant(m, idx)
    assert not is_square(d, "geometric")


def test_saturation_e2(e2, hp2):
    m, secs, tors = e2
    G = hp2.gram(list(secs.values()), scale=4)
    det, adm = gram_index_bound(G)
    assert (det, adm) == (8, [1, 2])
    rep = saturation_check(m, secs, tors, (2, 4), adm)
    assert rep.verdict == "saturated" and rep.image_size == rep.full_size == 16
    cos = psi_nontrivial_cosets(m, secs["P2"], {"O": m.O, **tors, "T1+T2": m.add(tors["T1"], tors["T2"])})
    assert all(cos.values())


def test_saturation_detects_index_two(e2):
    m, secs, tors = e2
    doubled = {"P1": secs["P1"], "2P2": m.scalar_mul(2, secs["P2"])}
    rep = saturation_check(m, doubled, tors, (2, 4), [1, 2])
    assert rep.verdict.startswith("undecided") and rep.image_size < rep.full_size


def test_galois_rank_e2(e2, hp2):
    m, secs, tors = e2
    rep = galois_rank_over_Q(m, [secs["P1"], secs["P2"]], [power_automorphism(cyclotomic8(), 7)], hp2,
                             list(tors.values()))
    assert rep.rank_over_base == expected("E2")["rank_over_Q"]
    assert list(rep.matrices.values())[0] == [[-1, 0], [0, 1]]
    assert rep.rational_generators == [1]


def test_rational_model_descends_coefficients():
    assert rational_model(section_model("E2")).base.constants == QQ


def test_shioda_tate():
    assert shioda_tate_rank(10, 9) == 1
    with pytest.raises(MordellWeilError):
        shioda_tate_rank(8, 9)


def test_additivity_requires_cover_certificate():
    t = model("E1").base.t
    cert = certify_twist(model("E1"), model("E1p"), -(5 * t - 1))
    a, b = RankStatement("A", 0, "exact"), RankStatement("B", 1, "exact")
    with pytest.raises(MordellWeilError):
        twist_rank_additivity(cert, a, b)
    out = twist_rank_additivity(TwistCertificate("double_cover"), a, b, "C")
    assert out.rank == 1 and out.kind == "exact"
