"""Square classes of integers, polynomials and rational functions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fields import QQ, rational_square_class, squarefree_integer_part
from .poly import Poly, RationalFunction, gcd, squarefree_decomposition


def _normalize_content(field, c):
    if field == QQ:
        return Fraction(rational_square_class(c))
    return field(c)


@dataclass(frozen=True)
class SquareClass:
    """Class of ``content * poly`` modulo squares; ``poly`` is monic and squarefree.

    Over QQ the content is normalized to a squarefree integer.  Over other
    fields the content is kept as given and compared through exact square
    roots of quotients.
    """

    field: object
    content: object
    poly: Poly

    @property
    def sign(self) -> int:
        if self.field == QQ:
            return 1 if self.content > 0 else -1
        return 1

    @classmethod
    def one(cls, field) -> "SquareClass":
        return cls(field, field.one, Poly.constant(field, 1))

    @classmethod
    def of(cls, f) -> "SquareClass":
        """Square class of a nonzero Poly or RationalFunction."""
        if isinstance(f, RationalFunction):
            f = f.num * f.den
        if not isinstance(f, Poly):
            raise TypeError("expected a polynomial or rational function")
        if f.is_zero():
            raise ValueError("square class of zero undefined")
        F = f.field
        part = Poly.constant(F, 1)
        for g, m in squarefree_decomposition(f):
            if m % 2:
                part = part * g
        return cls(F, _normalize_content(F, f.lc), part)

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        g = gcd(self.poly, other.poly)
        if g.degree > 0:
            poly = (self.poly.exact_div(g) * other.poly.exact_div(g)).monic()
        else:
            poly = self.poly * other.poly
        return SquareClass(self.field, _normalize_content(self.field, self.content * other.content), poly)

    def geometric_equal(self, other: "SquareClass") -> bool:
        return self.poly == other.poly

    def __eq__(self, other):
        if not isinstance(other, SquareClass):
            return NotImplemented
        if self.poly != other.poly:
            return False
        return self.field.sqrt(self.content / other.content) is not None

    def __hash__(self):
        return hash(self.poly.c)

    def is_trivial(self, mode: str = "geometric") -> bool:
        if self.poly.degree > 0:
            return False
        if mode == "geometric":
            return True
        return self.field.sqrt(self.content) is not None

    def to_string(self, var: str = "t") -> str:
        c = self.content
        if self.poly.degree == 0:
            return str(c)
        if c == 1:
            return self.poly.to_string(var)
        return f"{c}*({self.poly.to_string(var)})"

    def __repr__(self):
        return f"SquareClass({self.to_string()})"


def squarefree_part(f):
    """Squarefree kernel of an integer (sign kept) or the square class of a polynomial.

    12 -> 3; (t^2-1)^2 (t-2) -> class of (t-2).
    """
    if isinstance(f, (int, Fraction)) and not isinstance(f, bool):
        f = Fraction(f)
        if f == 0:
            raise ValueError("square class of zero undefined")
        if f.denominator == 1:
            return squarefree_integer_part(f.numerator)
        return rational_square_class(f)
    return SquareClass.of(f)


def is_square(f, mode: str = "geometric") -> bool:
    """Squareness of a rational function.

    ``geometric``: every irreducible factor has even multiplicity (a square
    over the algebraic closure of the constants).  ``rational``: in addition
    the leading content is a square in the coefficient field.  The zero
    function counts as a square.
    """
    if mode not in ("geometric", "rational"):
        raise ValueError("mode must be 'geometric' or 'rational'")
    if isinstance(f, RationalFunction):
        if f.is_zero():
            return True
        f = f.num * f.den
    if f.is_zero():
        return True
    for _, m in squarefree_decomposition(f):
        if m % 2:
            return False
    if mode == "rational":
        return f.field.sqrt(f.lc) is not None
    return True


def sqrt_poly(f: Poly) -> Poly | None:
    """Exact square root of a polynomial over its field, or None."""
    if f.is_zero():
        return f
    if f.degree % 2:
        return None
    c = f.field.sqrt(f.lc)
    if c is None:
        return None
    g = Poly.constant(f.field, 1)
    for h, m in squarefree_decomposition(f):
        if m % 2:
            return None
        g = g * h ** (m // 2)
    g = g * c
    return g if g * g == f else None
