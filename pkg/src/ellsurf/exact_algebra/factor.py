"""Factorization over QQ (small degree) and over prime fields."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .fields import QQ
from .poly import Poly, squarefree_decomposition

MAX_RATIONAL_DEGREE = 4


class SupplyPlacesError(ValueError):
    pass


@dataclass(frozen=True)
class Factor:
    poly: Poly
    multiplicity: int
    certificate: str


def _to_sympy(f: Poly, x):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f.c)], x, domain="QQ")


def _from_sympy(g, field=QQ) -> Poly:
    return Poly(field, [Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())])


def mod_p_certificate(f: Poly, max_prime: int = 2000) -> int | None:
    """A prime p not dividing the leading coefficient or discriminant with f irreducible mod p."""
    from ..finite_fields import PrimeField, is_irreducible_fp

    den = 1
    for c in f.c:
        den = den * c.denominator // sympy.gcd(den, c.denominator)
    ints = [int(c * den) for c in f.c]
    x = sympy.Symbol("x")
    disc = int(sympy.discriminant(sympy.Poly(list(reversed(ints)), x)))
    for p in sympy.primerange(3, max_prime):
        if ints[-1] % p == 0 or disc % p == 0:
            continue
        if is_irreducible_fp(Poly(PrimeField(p), ints)):
            return p
    return None


def certify_irreducible_q(f: Poly) -> str:
    if f.degree == 1:
        return "linear"
    p = mod_p_certificate(f)
    if p is not None:
        return f"irreducible mod {p}"
    x = sympy.Symbol("x")
    if _to_sympy(f, x).is_irreducible:
        return "irreducible over QQ (no mod-p witness exists; full factorization)"
    raise ValueError("polynomial is reducible over QQ")


def factor_rational(f: Poly, candidates=None) -> list[Factor]:
    """Irreducible factorization over QQ with multiplicities.

    Irreducible factors of degree above 4 are only accepted if they are among
    ``candidates`` (then verified by exact division and an irreducibility
    certificate); otherwise SupplyPlacesError("supply places") is raised.
    """
    if f.degree <= 0:
        return []
    x = sympy.Symbol("x")
    cand = [c.monic() for c in (candidates or [])]
    out = []
    for g, m in squarefree_decomposition(f):
        rest = g
        for c in cand:
            if c.degree > 0 and c.divides(rest):
                out.append(Factor(c, m, certify_irreducible_q(c)))
                rest = rest.exact_div(c)
        if rest.degree <= 0:
            continue
        _, facs = sympy.factor_list(_to_sympy(rest, x))
        for h, e in facs:
            hp = _from_sympy(h).monic()
            if hp.degree > MAX_RATIONAL_DEGREE:
                raise SupplyPlacesError(f"supply places: irreducible factor of degree {hp.degree}")
            out.append(Factor(hp, m * e, certify_irreducible_q(hp)))
    return sorted(out, key=lambda fa: (fa.poly.degree, fa.poly.c, fa.multiplicity))


def factor(f: Poly, candidates=None) -> list[tuple[Poly, int]]:
    """Factor over QQ or a prime field; returns (monic irreducible, multiplicity) pairs."""
    F = f.field
    if F == QQ:
        return [(fa.poly, fa.multiplicity) for fa in factor_rational(f, candidates)]
    if F.characteristic and getattr(F, "degree", 1) == 1:
        from ..finite_fields import factor_fp

        return factor_fp(f)
    raise NotImplementedError("factorization is available over QQ and prime fields only")
