from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ellsurf.frobenius_spectra import (CharPoly, SpectrumError, artin_tate_class, cyclotomic_count,
                                       discriminant_gate, duality_complete, picard_bound, quotient_traces,
                                       roots_on_weil_circle, traces_to_charpoly)

X = sympy.Symbol("x")


def cp(expr, q):
    return CharPoly.from_sympy(expr, q)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-40, 40), min_size=1, max_size=24))
def test_newton_round_trip_on_integer_spectra(roots):
    P = CharPoly.from_sympy(sympy.prod([X - r for r in roots]), 1)
    sums = P.power_sums(P.dim)
    assert sums == [sum(r ** k for r in roots) for k in range(1, P.dim + 1)]
    assert traces_to_charpoly(sums, P.dim, 1) == P


def test_inconsistent_traces_rejected():
    with pytest.raises(SpectrumError):
        traces_to_charpoly([1, 2], 2)


def test_base_change_squares_roots():
    P = cp((X - 17) * (X ** 2 - 8 * X + 289), 17)
    y = sympy.Symbol("y")
    # roots squared, via Res_y(P(y), x - y^2)
    ref = sympy.Poly(sympy.resultant(P.as_sympy(y), X - y ** 2, y), X)
    assert P.base_change(2) == CharPoly(tuple(int(c) for c in ref.monic().all_coeffs()), 289)


def test_cyclotomic_count_known_factors():
    q = 17
    zeta_part = sympy.expand(q ** 2 * sympy.cyclotomic_poly(3, X / q)) * sympy.expand(
        q ** 4 * sympy.cyclotomic_poly(8, X / q))
    P = cp((X - q) ** 5 * (X + q) ** 2 * zeta_part * (X ** 4 - 8 * X ** 3 + 238 * X ** 2 - 2312 * X + 83521), q)
    assert cyclotomic_count(P) == 5 + 2 + 2 + 4


def test_picard_bound_conclusions():
    P = cp((X - 17) ** 18 * (X ** 4 - 8 * X ** 3 + 238 * X ** 2 - 2312 * X + 83521), 17)
    rep = picard_bound(P, 18)
    assert rep.rank_bound == 18 and "full rank" in rep.conclusion
    assert "rho <= 18" in picard_bound(P, 17).conclusion


@pytest.mark.parametrize("q,b,c", [(121, -158, 14641), (289, 94, 83521)])
def test_artin_tate_class(q, b, c):
    P = cp((X - q) ** 20 * (X ** 2 + b * X + c), q)
    got = artin_tate_class(P, 20)
    val = -Fraction(q * q + b * q + c, q * q)
    n = val.numerator * val.denominator
    assert got == sympy.sign(n) * sympy.Mul(*[pr for pr, e in sympy.factorint(abs(n)).items() if e % 2])


def test_artin_tate_requires_square_q():
    with pytest.raises(SpectrumError):
        artin_tate_class(cp((X - 17) * (X - 3), 17))


def test_discriminant_gate():
    assert discriminant_gate([-21, -42], 20).verdict == "rank <= 19"
    assert discriminant_gate([-21, -21], 20).verdict == "inconclusive"


def test_weil_circle():
    assert roots_on_weil_circle(cp(X ** 4 - 8 * X ** 3 + 238 * X ** 2 - 2312 * X + 83521, 17))
    assert not roots_on_weil_circle(cp((X - 1) * (X - 289), 17))


def test_duality_completion_recovers_polynomial():
    q = 7
    known = cp((X - q) ** 6, q)
    unknown = sympy.expand((X ** 2 - 3 * X + 49) * (X ** 2 + 5 * X + 49))
    full = cp((X - q) ** 6 * unknown, q)
    sums = full.power_sums(10)
    counts = [1 + q ** (2 * m) + s_ for m, s_ in enumerate(sums, start=1)]
    res = duality_complete(quotient_traces(counts, known)[:3], known, 10)
    assert res.unknown == cp(unknown, q)
    assert res.full == full
