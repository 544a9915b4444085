"""Coefficient fields: the rationals and number fields Q[z]/(m(z)).

Elements of QQ are plain :class:`fractions.Fraction` objects.  Number field
elements are immutable coordinate vectors over QQ in the power basis.

Every field object exposes the same small surface used by the polynomial
code: ``zero``, ``one``, ``__call__`` (coercion), ``characteristic``,
``is_square`` and ``sqrt``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property

import sympy


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def squarefree_integer_part(n: int) -> int:
    """Squarefree kernel of a nonzero integer, sign kept (12 -> 3, -8 -> -2)."""
    if n == 0:
        raise ValueError("square class of zero undefined")
    sign = -1 if n < 0 else 1
    out = 1
    for prime, e in sympy.factorint(abs(n)).items():
        if e % 2:
            out *= prime
    return sign * out


def rational_square_class(c: Fraction) -> int:
    """Squarefree integer s with c/s a rational square."""
    c = Fraction(c)
    return squarefree_integer_part(c.numerator * c.denominator)


class RationalField:
    """The field QQ; elements are :class:`Fraction`."""

    characteristic = 0
    degree = 1
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, NFElement):
            raise TypeError("cannot coerce a number field element into QQ")
        return Fraction(x)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction))

    def sqrt(self, c) -> Fraction | None:
        c = Fraction(c)
        if c < 0:
            return None
        n = _isqrt_exact(c.numerator)
        d = _isqrt_exact(c.denominator)
        if n is None or d is None:
            return None
        return Fraction(n, d)

    def is_square(self, c) -> bool:
        return self.sqrt(c) is not None

    def coordinates(self, x) -> tuple[Fraction, ...]:
        return (Fraction(x),)


QQ = RationalField()


def _poly_mulmod_int(a, b, mod, p):
    """Multiply coefficient lists modulo the monic ``mod`` and the integer ``p``."""
    d = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k] % p
        if c:
            for j in range(d + 1):
                prod[k - d + j] -= c * mod[j]
        prod[k] = 0
    return [x % p for x in prod[:d]] + [0] * max(0, d - len(prod))


def _rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Find r/s == a (mod m) with |r|, s <= sqrt(m/2)."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


class NumberField:
    """Q[z]/(m(z)) for a monic irreducible integer polynomial m.

    ``modulus`` is given low degree first.  Irreducibility over Q is checked
    at construction and the certificate is kept in ``irreducibility_certificate``.
    """

    characteristic = 0

    def __init__(self, modulus, name: str = "z"):
        modulus = [int(c) for c in modulus]
        if modulus[-1] != 1:
            raise ValueError("number field modulus must be monic")
        if len(modulus) < 2:
            raise ValueError("number field modulus must have positive degree")
        self.modulus = tuple(modulus)
        self.degree = len(modulus) - 1
        self.name = name
        x = sympy.Symbol("x")
        poly = sympy.Poly(list(reversed(modulus)), x, domain="QQ")
        if not poly.is_irreducible:
            raise ValueError(f"modulus {poly.as_expr()} is reducible over QQ")
        self.irreducibility_certificate = "irreducible over QQ (sympy factorization)"
        # reduction of z^k for d <= k <= 2d - 2 into the power basis
        d = self.degree
        table = {}
        cur = [Fraction(0)] * d
        cur[d - 1] = Fraction(1)  # z^(d-1)
        for k in range(d, 2 * d - 1):
            top = cur[d - 1]
            nxt = [Fraction(0)] + cur[: d - 1]
            for j in range(d):
                nxt[j] -= top * modulus[j]
            table[k] = tuple(nxt)
            cur = nxt
        self._reduce_table = table
        self.zero = NFElement(self, (Fraction(0),) * d)
        self.one = NFElement(self, (Fraction(1),) + (Fraction(0),) * (d - 1))

    def __repr__(self):
        terms = " + ".join(f"{c}*{self.name}^{i}" for i, c in enumerate(self.modulus) if c)
        return f"NumberField({terms})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("NF", self.modulus))

    @property
    def gen(self) -> "NFElement":
        coords = [Fraction(0)] * self.degree
        if self.degree == 1:
            return self(-self.modulus[0])
        coords[1] = Fraction(1)
        return NFElement(self, tuple(coords))

    def __call__(self, x) -> "NFElement":
        if isinstance(x, NFElement):
            if x.field != self:
                raise TypeError("element belongs to a different number field")
            return x
        if isinstance(x, (list, tuple)):
            coords = [Fraction(c) for c in x] + [Fraction(0)] * (self.degree - len(x))
            if len(coords) > self.degree:
                return self.from_poly_coeffs(coords)
            return NFElement(self, tuple(coords))
        return NFElement(self, (Fraction(x),) + (Fraction(0),) * (self.degree - 1))

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction)) or (isinstance(x, NFElement) and x.field == self)

    def from_poly_coeffs(self, coeffs) -> "NFElement":
        d = self.degree
        out = [Fraction(0)] * d
        for k, c in enumerate(coeffs):
            c = Fraction(c)
            if not c:
                continue
            if k < d:
                out[k] += c
            else:
                # generic reduction for large powers
                vec = self._power_vector(k)
                for j in range(d):
                    out[j] += c * vec[j]
        return NFElement(self, tuple(out))

    def _power_vector(self, k):
        if k < self.degree:
            v = [Fraction(0)] * self.degree
            v[k] = Fraction(1)
            return tuple(v)
        if k in self._reduce_table:
            return self._reduce_table[k]
        g = self.gen
        return (g ** k).coords

    # -- square roots -------------------------------------------------------

    @cached_property
    def _split_primes(self):
        """A few odd primes p where the modulus splits into distinct linear factors mod p."""
        mod = self.modulus
        disc = int(sympy.discriminant(sympy.Poly(list(reversed(mod)), sympy.Symbol("x"))))
        found = []
        for p in sympy.primerange(3, 10 ** 6):
            if disc % p == 0:
                continue
            roots = self.embeddings_mod(p)
            if len(roots) == self.degree:
                found.append((p, roots))
                if len(found) == 12:
                    return found
        raise RuntimeError("not enough totally split primes found")

    def embeddings_mod(self, p: int):
        """Roots of the modulus in F_p (one per embedding of the field into F_p)."""
        mod = self.modulus
        return [r for r in range(p) if sum(c * pow(r, i, p) for i, c in enumerate(mod)) % p == 0]

    def sqrt(self, c) -> "NFElement | None":
        """Exact square root in the field, or None.

        Works p-adically: pick a prime where the modulus splits completely,
        take square roots in each embedding, Hensel-lift, interpolate,
        rationally reconstruct, and verify the candidate exactly.
        """
        c = self(c)
        if c.is_zero():
            return self.zero
        if c.is_rational():
            r = QQ.sqrt(c.coords[0])
            if r is not None:
                return self(r)
        den = math.lcm(*(x.denominator for x in c.coords))
        # c * den^2 is integral; sqrt(c) = sqrt(c * den^2) / den
        cint = [int(x * den) * den for x in c.coords]
        from ..finite_fields import sqrt_mod_prime

        for p, roots in self._split_primes:
            vals = [sum(ci * pow(r, i, p) for i, ci in enumerate(cint)) % p for r in roots]
            if 0 in vals:
                continue
            residues = [sqrt_mod_prime(v, p) for v in vals]
            if any(s is None for s in residues):
                return None
            prec = 1
            while prec <= 4096:
                prec *= 2
                mod_k = p ** prec
                lifted_roots = [_hensel_root(self.modulus, r, p, prec) for r in roots]
                vals_k = [sum(ci * pow(r, i, mod_k) for i, ci in enumerate(cint)) % mod_k for r in lifted_roots]
                lifted = [_hensel_sqrt(v, s, p, prec) for v, s in zip(vals_k, residues)]
                for signs in itertools.product((1, -1), repeat=self.degree - 1):
                    targets = [lifted[0]] + [sg * s for sg, s in zip(signs, lifted[1:])]
                    coeffs = _interpolate_mod(lifted_roots, targets, mod_k)
                    if coeffs is None:
                        continue
                    rec = [_rational_reconstruct(a, mod_k) for a in coeffs]
                    if any(x is None for x in rec):
                        continue
                    cand = NFElement(self, tuple(x / den for x in rec))
                    if cand * cand == c:
                        return cand
            return None
        raise RuntimeError("element vanishes at every sampled split prime")

    def is_square(self, c) -> bool:
        return self.sqrt(c) is not None

    def coordinates(self, x) -> tuple[Fraction, ...]:
        return self(x).coords

    def reduce_mod(self, x, p: int, root: int) -> int:
        """Image of x in F_p under z -> root (denominators must be prime to p)."""
        x = self(x)
        total = 0
        for i, q in enumerate(x.coords):
            if q:
                if q.denominator % p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {p}")
                total += q.numerator * pow(q.denominator, -1, p) * pow(root, i, p)
        return total % p


def _hensel_root(mod, r, p, prec):
    m = p ** prec
    f = lambda x: sum(c * pow(x, i, m) for i, c in enumerate(mod)) % m
    df = lambda x: sum(i * c * pow(x, i - 1, m) for i, c in enumerate(mod) if i) % m
    x = r
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        mk = p ** k
        x = (x - f(x) * pow(df(x), -1, mk)) % mk
    return x % m


def _hensel_sqrt(v, s, p, prec):
    m = p ** prec
    x = s
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        mk = p ** k
        x = (x - (x * x - v) * pow(2 * x, -1, mk)) % mk
    return x % m


def _interpolate_mod(xs, ys, m):
    """Coefficients of the polynomial of degree < len(xs) through (xs, ys) mod m."""
    n = len(xs)
    # Newton divided differences; the xs are distinct units mod p
    coef = list(ys)
    try:
        for j in range(1, n):
            for i in range(n - 1, j - 1, -1):
                coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, m) % m
    except ValueError:
        return None
    out = [0] * n
    for i in range(n - 1, -1, -1):
        # out = out * (x - xs[i]) + coef[i]
        new = [0] * n
        for k in range(n - 1):
            new[k + 1] = out[k]
        for k in range(n):
            new[k] = (new[k] - xs[i] * out[k]) % m
        new[0] = (new[0] + coef[i]) % m
        out = new
    return out


class NFElement:
    """Element of a :class:`NumberField` in power-basis coordinates."""

    __slots__ = ("field", "coords", "_hash")

    def __init__(self, field: NumberField, coords):
        self.field = field
        self.coords = coords
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, NFElement):
            if other.field is not self.field and other.field != self.field:
                raise TypeError("mixed number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return NFElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return NFElement(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElement(self.field, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        prod[i + j] += a * b
        out = prod[:d]
        table = self.field._reduce_table
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                vec = table[k]
                for j in range(d):
                    if vec[j]:
                        out[j] += c * vec[j]
        return NFElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "NFElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in number field")
        if self.is_rational():
            return self.field(1 / self.coords[0])
        # solve M y = e0 where M is multiplication by self
        d = self.field.degree
        cols = []
        basis = [self.field._power_vector(k) for k in range(d)]
        for k in range(d):
            cols.append((self * NFElement(self.field, basis[k])).coords)
        # matrix rows i, columns k: M[i][k] = cols[k][i]
        mat = [[cols[k][i] for k in range(d)] + [Fraction(1 if i == 0 else 0)] for i in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if mat[r][c] != 0)
            mat[c], mat[piv] = mat[piv], mat[c]
            inv = 1 / mat[c][c]
            mat[c] = [v * inv for v in mat[c]]
            for r in range(d):
                if r != c and mat[r][c]:
                    f = mat[r][c]
                    mat[r] = [v - f * w for v, w in zip(mat[r], mat[c])]
        return NFElement(self.field, tuple(mat[i][d] for i in range(d)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return NFElement(self.field, tuple(a / other for a in self.coords))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, NFElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords[0]) if self.is_rational() else hash(self.coords)
        return self._hash

    def norm(self) -> Fraction:
        d = self.field.degree
        basis = [self.field._power_vector(k) for k in range(d)]
        rows = [(self * NFElement(self.field, b)).coords for b in basis]
        return Fraction(sympy.Matrix(rows).det())

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                g = self.field.name if i == 1 else f"{self.field.name}^{i}"
                terms.append(g if c == 1 else f"{c}*{g}")
        return "(" + " + ".join(terms) + ")" if terms else "0"


def field_of(*values):
    """Smallest declared field containing all given scalars (QQ unless a number field appears)."""
    for v in values:
        if isinstance(v, NFElement):
            return v.field
    return QQ


def cyclotomic8() -> NumberField:
    """Q(zeta_8) = Q[z]/(z^4 + 1): contains i = z^2 and sqrt(2) = z - z^3."""
    return NumberField([1, 0, 0, 0, 1], name="z")
