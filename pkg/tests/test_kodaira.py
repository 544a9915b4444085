import pytest
import sympy

from conftest import FIXTURES, T, expected, model, spec
from ellsurf.kodaira import bad_places, fiber_table, surface_invariants, verify_good_reduction

TABLED = [n for n in FIXTURES if "fibers" in expected(n)]


def _oracle_euler(name):
    """Sum of minimal discriminant orders over P^1, from sympy alone.

    For semistable and I_n* fibers in characteristic 0 the local Euler number
    is the order of the minimal discriminant; minimality removes multiples of 12.
    """
    m = spec(name).text
    import yaml
    d = yaml.safe_load(m)["model"]
    parse = lambda s: sympy.sympify(s.replace("^", "**"), locals={"t": T})
    r, s = parse(d["r"]), parse(d["s"])
    u = parse(d.get("twist", "1"))
    disc = sympy.factor(16 * u ** 6 * r ** 2 * s ** 2 * (r - s) ** 2)
    num, den = sympy.fraction(sympy.together(disc))
    num, den = sympy.Poly(num, T), sympy.Poly(den, T)
    e = 0
    for poly in (num, den):
        for g, k in poly.factor_list()[1]:
            if g.degree() > 0:
                order = k if poly is num else -k
                e += (order % 12) * g.degree()
    e += (-(num.degree() - den.degree())) % 12
    return e


@pytest.mark.parametrize("name", TABLED)
def test_fiber_tables(name):
    fibers = bad_places(model(name), spec(name).declared_places())
    rows = [(p, ty, g) for p, ty, g in fiber_table(fibers)]
    want = [(r["place"], r["type"], r["group"]) for r in expected(name)["fibers"]]
    assert sorted(rows) == sorted(want)


@pytest.mark.parametrize("name", FIXTURES)
def test_euler_number_against_discriminant_oracle(name):
    inv = surface_invariants(model(name))
    assert inv.e == expected(name)["euler_number"]
    assert inv.e == _oracle_euler(name)


@pytest.mark.parametrize("name", FIXTURES)
def test_trivial_rank(name):
    assert surface_invariants(model(name)).trivial_rank == expected(name)["trivial_rank"]


@pytest.mark.parametrize("name", ["E1", "E2", "E3"])
def test_kodaira_dimension(name):
    inv = surface_invariants(model(name))
    assert inv.kodaira_dim == expected(name)["kodaira_dimension"]
    assert inv.b2 == inv.e - 2


def test_local_euler_numbers():
    for f in bad_places(model("E1pp")):
        if f.type.endswith("*"):
            assert f.e_v == f.m_v + 1
        else:
            assert f.e_v == f.m_v


def test_component_groups_bound_torsion():
    inv = surface_invariants(model("E3"))
    assert max(inv.torsion_bound) == 4


@pytest.mark.parametrize("name,p,good", [("E1p", 17, True), ("E1pp", 11, True), ("E1pp", 5, False),
                                          ("E3", 17, True), ("E3", 5, False), ("E2p", 13, True)])
def test_good_reduction(name, p, good):
    ok, rep = verify_good_reduction(model(name), p)
    assert ok is good
    if not good:
        assert rep.mismatches
