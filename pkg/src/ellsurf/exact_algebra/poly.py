"""Dense univariate polynomials and rational functions over an exact field.

Coefficients are stored low degree first.  The field object supplies
``zero``/``one`` and coercion; arithmetic uses the element operators, so the
same code runs over QQ, number fields and finite fields.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class Poly:
    __slots__ = ("field", "c")

    def __init__(self, field, coeffs: Iterable = ()):
        self.field = field
        cs = [field(x) for x in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.c = tuple(cs)

    @classmethod
    def _raw(cls, field, cs):
        p = object.__new__(cls)
        p.field = field
        cs = list(cs)
        while cs and not cs[-1]:
            cs.pop()
        p.c = tuple(cs)
        return p

    @classmethod
    def constant(cls, field, a):
        return cls(field, [a])

    @classmethod
    def x(cls, field):
        return cls._raw(field, [field.zero, field.one])

    @classmethod
    def monomial(cls, field, n, a=1):
        return cls._raw(field, [field.zero] * n + [field(a)])

    @classmethod
    def from_roots(cls, field, roots):
        out = cls.constant(field, 1)
        for r in roots:
            out = out * cls._raw(field, [-field(r), field.one])
        return out

    # -- basic structure --------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.c) - 1 if self.c else -1

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    @property
    def lc(self):
        return self.c[-1] if self.c else self.field.zero

    def coeff(self, k: int):
        return self.c[k] if 0 <= k < len(self.c) else self.field.zero

    def monic(self) -> "Poly":
        if not self.c:
            return self
        inv = 1 / self.c[-1]
        return Poly._raw(self.field, [a * inv for a in self.c])

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)) or self.field.contains(other):
            return self.c == Poly(self.field, [other]).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly({self.to_string()})"

    def to_string(self, var: str = "t") -> str:
        if not self.c:
            return "0"
        terms = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if not a:
                continue
            s = str(a)
            if k == 0:
                terms.append(s)
            else:
                mon = var if k == 1 else f"{var}^{k}"
                if a == 1:
                    terms.append(mon)
                elif a == -1:
                    terms.append("-" + mon)
                else:
                    terms.append(f"{s}*{mon}")
        return " + ".join(terms).replace("+ -", "- ")

    # -- arithmetic --------------------------------------------------------

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly(self.field, [other])

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        o = self._lift(other)
        n = max(len(self.c), len(o.c))
        z = self.field.zero
        return Poly._raw(self.field, [
            (self.c[i] if i < len(self.c) else z) + (o.c[i] if i < len(o.c) else z) for i in range(n)
        ])

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, [-a for a in self.c])

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if not isinstance(other, Poly):
            a = self.field(other)
            if not a:
                return Poly._raw(self.field, [])
            return Poly._raw(self.field, [x * a for x in self.c])
        if not self.c or not other.c:
            return Poly._raw(self.field, [])
        a, b = self.c, other.c
        out = [self.field.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return Poly._raw(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod(self, other: "Poly"):
        other = self._lift(other)
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return Poly._raw(self.field, []), self
        inv = 1 / other.c[-1]
        q = [self.field.zero] * (dq + 1)
        m = len(other.c)
        for k in range(dq, -1, -1):
            coef = r[k + m - 1] * inv
            q[k] = coef
            if coef:
                for j in range(m):
                    r[k + j] = r[k + j] - coef * other.c[j]
        return Poly._raw(self.field, q), Poly._raw(self.field, r[: m - 1])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def divides(self, other: "Poly") -> bool:
        return not (other % self)

    def __truediv__(self, other):
        if isinstance(other, (Poly, RationalFunction)):
            return RationalFunction(self) / other
        return self * (1 / self.field(other))

    # -- evaluation and calculus ------------------------------------------

    def __call__(self, x):
        acc = None
        for a in reversed(self.c):
            acc = a if acc is None else acc * x + a
        if acc is None:
            return self.field.zero if not isinstance(x, (Poly, RationalFunction)) else Poly(self.field, [])
        if isinstance(x, (Poly, RationalFunction)) and not isinstance(acc, (Poly, RationalFunction)):
            return Poly(self.field, [acc])
        return acc

    def compose(self, g):
        return self(g)

    def derivative(self) -> "Poly":
        return Poly._raw(self.field, [a * k for k, a in enumerate(self.c)][1:])

    def reverse(self, n: int | None = None) -> "Poly":
        """t^n * f(1/t) with n defaulting to the degree."""
        if n is None:
            n = self.degree
        cs = list(self.c) + [self.field.zero] * (n + 1 - len(self.c))
        return Poly._raw(self.field, list(reversed(cs[: n + 1])))

    def map_coeffs(self, fn, field=None) -> "Poly":
        field = field or self.field
        return Poly(field, [fn(a) for a in self.c])

    def valuation_at_zero(self) -> int:
        for k, a in enumerate(self.c):
            if a:
                return k
        raise ValueError("valuation of the zero polynomial")

    def order_at(self, pi: "Poly") -> int:
        """Largest k with pi^k dividing self."""
        if not self.c:
            raise ValueError("order of the zero polynomial")
        k = 0
        f = self
        while True:
            q, r = f.divmod(pi)
            if r:
                return k
            f = q
            k += 1

    def strip_factor(self, pi: "Poly"):
        """Return (k, f / pi^k) with k the order of pi in f."""
        k = 0
        f = self
        while True:
            q, r = f.divmod(pi)
            if r:
                return k, f
            f = q
            k += 1

    def content_scalar(self):
        return self.lc


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    if a.degree > 0 and b.degree > 0 and max(a.degree, b.degree) >= 3 and a.field.characteristic == 0:
        from .modgcd import modular_gcd

        return modular_gcd(a, b)
    while b.c:
        a, b = b, a % b
    return a.monic()


def xgcd(a: Poly, b: Poly):
    """(g, s, t) with s*a + t*b = g monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.constant(F, 1), Poly(F, [])
    t0, t1 = Poly(F, []), Poly.constant(F, 1)
    while r1.c:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0.c:
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def lcm(a: Poly, b: Poly) -> Poly:
    if not a.c or not b.c:
        return Poly(a.field, [])
    return (a * b).exact_div(gcd(a, b)).monic()


def squarefree_decomposition(f: Poly):
    """List of (g, m), g monic squarefree and pairwise coprime, with f = lc * prod g^m.

    In characteristic p the p-th power part is handled by taking p-th roots of
    coefficients (valid over perfect fields).
    """
    return _squarefree_peel(f)


def _squarefree_peel(f: Poly):
    F = f.field
    p = F.characteristic
    result: dict[int, Poly] = {}

    def go(h: Poly, mult: int):
        if h.degree <= 0:
            return
        d = h.derivative()
        if not d.c:
            root = Poly(F, [F.pth_root(h.c[k]) for k in range(0, len(h.c), p)])
            go(root, mult * p)
            return
        g = gcd(h, d)
        w = h.exact_div(g)  # product of distinct factors not p-th power related
        i = 1
        while w.degree > 0:
            y = gcd(w, g)
            fac = w.exact_div(y)
            if fac.degree > 0:
                result[i * mult] = result[i * mult] * fac if i * mult in result else fac
            w = y
            g = g.exact_div(y)
            i += 1
        # g now contains factors whose multiplicity is divisible by p
        if g.degree > 0:
            go(g.monic(), mult)

    go(f.monic(), 1)
    return sorted(((g.monic(), m) for m, g in result.items()), key=lambda t: t[1])


def squarefree_part(f: Poly) -> Poly:
    """Product of irreducible factors of odd multiplicity (monic)."""
    out = Poly.constant(f.field, 1)
    for g, m in _squarefree_peel(f):
        if m % 2:
            out = out * g
    return out


def radical(f: Poly) -> Poly:
    out = Poly.constant(f.field, 1)
    for g, _ in _squarefree_peel(f):
        out = out * g
    return out


def resultant(a: Poly, b: Poly):
    """Resultant via the Euclidean algorithm."""
    F = a.field
    if not a.c or not b.c:
        return F.zero
    res = F.one
    while True:
        da, db = a.degree, b.degree
        if db == 0:
            return res * b.lc ** da
        q, r = a.divmod(b)
        if not r.c:
            return F.zero
        dr = r.degree
        if (da * db) % 2:
            res = -res
        res = res * b.lc ** (da - dr)
        a, b = b, r


def discriminant(f: Poly):
    n = f.degree
    r = resultant(f, f.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * r / f.lc


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _normalized=False):
        F = num.field
        if den is None:
            den = Poly.constant(F, 1)
        if not den.c:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            if den.degree > 0 and num.c:
                g = gcd(num, den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            if not num.c:
                den = Poly.constant(F, 1)
            lc = den.lc
            if lc != 1:
                inv = 1 / lc
                num = num * inv
                den = den * inv
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def lift(cls, field, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Poly):
            return cls(x, None, _normalized=True)
        return cls(Poly(field, [x]), None, _normalized=True)

    def _l(self, x):
        return RationalFunction.lift(self.field, x)

    def is_zero(self):
        return not self.num.c

    def __bool__(self):
        return bool(self.num.c)

    def is_polynomial(self):
        return self.den.degree == 0

    def __add__(self, other):
        o = self._l(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        g = gcd(self.den, o.den)
        if g.degree == 0:
            return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)
        d1 = self.den.exact_div(g)
        d2 = o.den.exact_div(g)
        return RationalFunction(self.num * d2 + o.num * d1, d1 * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-self._l(other))

    def __rsub__(self, other):
        return self._l(other) - self

    def __mul__(self, other):
        o = self._l(other)
        if not self.num.c or not o.num.c:
            return RationalFunction(Poly(self.field, []))
        g1 = gcd(self.num, o.den)
        g2 = gcd(o.num, self.den)
        n1, d2 = (self.num.exact_div(g1), o.den.exact_div(g1)) if g1.degree > 0 else (self.num, o.den)
        n2, d1 = (o.num.exact_div(g2), self.den.exact_div(g2)) if g2.degree > 0 else (o.num, self.den)
        return RationalFunction(n1 * n2, d1 * d2, _normalized=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.c:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num, _normalized=False)

    def __truediv__(self, other):
        return self * self._l(other).inverse()

    def __rtruediv__(self, other):
        return self._l(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, _normalized=True)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly):
            return self.den.degree == 0 and self.num == other
        try:
            o = self._l(other)
        except Exception:
            return NotImplemented
        return self == o

    def __hash__(self):
        return hash((self.num.c, self.den.c))

    def __call__(self, x):
        n = self.num(x)
        d = self.den(x)
        if isinstance(d, (Poly, RationalFunction)):
            return RationalFunction.lift(self.field, n) / d
        if not d:
            raise ZeroDivisionError("pole of rational function")
        return n / d

    def derivative(self):
        return RationalFunction(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def order_at(self, pi: Poly) -> int:
        if not self.num.c:
            raise ValueError("order of zero")
        return self.num.order_at(pi) - self.den.order_at(pi)

    def order_at_infinity(self) -> int:
        """Valuation at t = infinity: deg den - deg num."""
        return self.den.degree - self.num.degree

    def map_coeffs(self, fn, field=None):
        return RationalFunction(self.num.map_coeffs(fn, field), self.den.map_coeffs(fn, field))

    def to_string(self, var="t"):
        if self.den.degree == 0:
            return self.num.to_string(var)
        return f"({self.num.to_string(var)})/({self.den.to_string(var)})"

    def __repr__(self):
        return f"RationalFunction({self.to_string()})"


def as_rf(field, x) -> RationalFunction:
    return RationalFunction.lift(field, x)


def poly_from_ints(field, coeffs: Sequence[int]) -> Poly:
    return Poly(field, coeffs)


class FunctionField:
    """The rational function field k(t) over an exact constant field k."""

    def __init__(self, constants, var: str = "t"):
        self.constants = constants
        self.var = var
        self.characteristic = constants.characteristic
        self.zero = RationalFunction(Poly(constants, []))
        self.one = RationalFunction(Poly.constant(constants, 1))

    def __repr__(self):
        return f"{self.constants!r}({self.var})"

    def __eq__(self, other):
        return isinstance(other, FunctionField) and other.constants == self.constants

    def __hash__(self):
        return hash(("FF", self.constants))

    @property
    def t(self) -> RationalFunction:
        return RationalFunction(Poly.x(self.constants))

    def __call__(self, x) -> RationalFunction:
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Poly):
            return RationalFunction(x)
        return RationalFunction(Poly(self.constants, [x]))

    def contains(self, x) -> bool:
        return isinstance(x, (RationalFunction, Poly)) or self.constants.contains(x)

    def sqrt(self, f) -> RationalFunction | None:
        from .squares import sqrt_poly

        f = self(f)
        n = sqrt_poly(f.num)
        if n is None:
            return None
        d = sqrt_poly(f.den)
        if d is None:
            return None
        return RationalFunction(n, d)

    def is_square(self, f) -> bool:
        return self.sqrt(f) is not None
