from fractions import Fraction

import pytest

from conftest import model, section_model, spec
from ellsurf.exact_algebra import QQ
from ellsurf.exact_algebra.poly import FunctionField
from ellsurf.weierstrass import (CurveError, WeierstrassModel, base_change, certify_double_cover, certify_twist,
                                 double_cover_discriminant, legendre_isomorphism, reduce_mod_p, scale_to_triple,
                                 specialize)
from ellsurf.workbench.specfile import parse_rf

QT = FunctionField(QQ)
t = QT.t


def test_legendre_discriminant():
    E = WeierstrassModel.factored(QQ, 1, 4)
    # 16 r^2 s^2 (r - s)^2
    assert E.discriminant() == 16 * 1 * 16 * 9
    with pytest.raises(CurveError):
        WeierstrassModel.factored(QQ, 2, 2)


def test_two_torsion_points():
    E = model("E2")
    pts = E.two_torsion_points()
    assert all(E.scalar_mul(2, P).is_infinity for P in pts)
    assert E.add(pts[1], pts[2]) == pts[0]


def test_sections_lie_on_models():
    for name in ["E1", "E2", "E3"]:
        m = section_model(name)
        pts = spec(name).points("sections", m)
        assert pts and all(m.contains(P) for P in pts.values())


def test_untwisted_section_of_e1pp():
    m = model("E1pp")
    Q = spec("E1pp").points("sections", m)["Q"]
    assert m.contains(Q)
    # u y^2 = x(x - r)(x - s) with x = y = 1 - t
    u = -t * (5 * t - 1)
    x = 1 - t
    assert u * x * x == x * (x - (t - 1) ** 2) * (x - 4 * t)


def test_e2_is_pullback_of_e1():
    pulled = base_change(model("E1"), t * t)
    assert legendre_isomorphism(pulled, model("E2")) is not None


def test_twist_certificates():
    E1 = model("E1")
    cert = certify_twist(E1, model("E1p"), -(5 * t - 1))
    assert cert.kind == "twist"
    with pytest.raises(CurveError):
        certify_twist(E1, model("E1p"), (t + 1) ** 2)


def test_double_cover_certificates():
    c = certify_double_cover(model("E1p"), model("E2p"), t * t, model("E1pp"))
    assert c.kind == "double_cover"
    phi = parse_rf("2*t/(5+t^2)", QQ)
    c3 = certify_double_cover(model("E2"), model("E3"), phi, model("E2p"))
    assert c3.detail["discriminant"] == QT(-20 * t * t + 4)
    with pytest.raises(CurveError):
        certify_double_cover(model("E1p"), model("E2p"), t * t, model("E1p"))


def test_double_cover_discriminant_of_square_map():
    assert double_cover_discriminant(t * t) == (4 * t).num


def test_specialize_e2_section():
    m = section_model("E2")
    E, P = specialize(m, 3, spec("E2").points("sections", m)["P2"])
    assert E.contains(P)
    with pytest.raises(CurveError):
        specialize(model("E2"), 1)


def test_scale_to_triple_roundtrip():
    E = WeierstrassModel.factored(QQ, Fraction(64, 9) ** 2, 4 * Fraction(4, 3) ** 2)
    for x in range(-30, 60):
        P = E.lift_x(Fraction(x, 9))
        if P is not None and P.y:
            Q = scale_to_triple(P, (7, 24, 25))
            assert scale_to_triple(Q, (7, 24, 25), inverse=True) == P
            break


def test_reduce_mod_p_keeps_shape():
    R = reduce_mod_p(model("E1p"), 17)
    assert R.base.constants.p == 17
    assert R.roots is not None
