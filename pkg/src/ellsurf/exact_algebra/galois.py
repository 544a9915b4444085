"""Field automorphisms of number fields and their coefficient-wise action."""

from __future__ import annotations

from fractions import Fraction

from .fields import NFElement, NumberField
from .poly import Poly, RationalFunction


class FieldAutomorphism:
    """Automorphism of a number field given by the image of the generator."""

    def __init__(self, field: NumberField, image):
        image = field(image)
        value = field.zero
        for k, c in enumerate(field.modulus):
            value = value + image ** k * c
        if value:
            raise ValueError("image of the generator is not a root of the modulus")
        self.field = field
        self.image = image
        self._powers = [image ** k for k in range(field.degree)]

    @classmethod
    def identity(cls, field: NumberField) -> "FieldAutomorphism":
        return cls(field, field.gen)

    def __call__(self, x):
        return galois_conjugate(x, self)

    def apply_element(self, x):
        if isinstance(x, (int, Fraction)):
            return x
        x = self.field(x)
        out = self.field.zero
        for c, pw in zip(x.coords, self._powers):
            if c:
                out = out + pw * c
        return out

    def compose(self, other: "FieldAutomorphism") -> "FieldAutomorphism":
        """self after other."""
        return FieldAutomorphism(self.field, self.apply_element(other.image))

    def __eq__(self, other):
        return isinstance(other, FieldAutomorphism) and self.field == other.field and self.image == other.image

    def __hash__(self):
        return hash(self.image)

    def is_identity(self) -> bool:
        return self.image == self.field.gen

    def __repr__(self):
        return f"FieldAutomorphism({self.field.name} -> {self.image})"


def power_automorphism(field: NumberField, k: int) -> FieldAutomorphism:
    """z -> z^k (an automorphism of a cyclotomic field for k prime to the conductor)."""
    return FieldAutomorphism(field, field.gen ** k)


def galois_conjugate(x, sigma: FieldAutomorphism):
    """Apply sigma to a scalar, polynomial, rational function, or nested tuple/list of those."""
    if isinstance(x, (int, Fraction, NFElement)):
        return sigma.apply_element(x)
    if isinstance(x, Poly):
        return Poly(x.field, [sigma.apply_element(c) for c in x.c])
    if isinstance(x, RationalFunction):
        return RationalFunction(galois_conjugate(x.num, sigma), galois_conjugate(x.den, sigma))
    if isinstance(x, tuple):
        return tuple(galois_conjugate(v, sigma) for v in x)
    if isinstance(x, list):
        return [galois_conjugate(v, sigma) for v in x]
    if hasattr(x, "map_coefficients"):
        return x.map_coefficients(lambda c: galois_conjugate(c, sigma))
    raise TypeError(f"cannot conjugate {type(x).__name__}")
