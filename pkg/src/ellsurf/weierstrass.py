"""Weierstrass models, points and the group law over any supported base field.

A base field is any object with ``zero``, ``one``, coercion via ``__call__``
and ``characteristic``: QQ, number fields, F_p, F_{p^m}, or a
:class:`FunctionField` k(t).  Models in factored (Legendre-like) form
y^2 = x(x - r)(x - s) keep r and s, since descent and fiber analysis use them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exact_algebra.fields import QQ, NFElement, NumberField
from .exact_algebra.poly import FunctionField, Poly, RationalFunction
from .exact_algebra.factor import factor_rational


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class Place:
    """A place of P^1 over a constant field: a monic irreducible polynomial, or infinity."""

    poly: Poly | None  # None means infinity

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @classmethod
    def at(cls, field, value) -> "Place":
        """The degree-one place t = value."""
        return cls(Poly(field, [-field(value), 1]))

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def label(self, var: str = "t") -> str:
        if self.poly is None:
            return "inf"
        if self.poly.degree == 1:
            return f"{var}={-self.poly.c[0]}"
        return f"roots of {self.poly.to_string(var)}"

    def __repr__(self):
        return f"Place({self.label()})"

    def sort_key(self):
        if self.poly is None:
            return (10 ** 9, ())
        return (self.poly.degree, tuple(str(c) for c in self.poly.c))


class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over ``base``."""

    def __init__(self, base, a1=0, a2=0, a3=0, a4=0, a6=0, roots=None, name: str = "", allow_singular=False, provenance=None):
        self.base = base
        self.a = tuple(base(c) for c in (a1, a2, a3, a4, a6))
        self.roots = None if roots is None else tuple(base(r) for r in roots)
        self.name = name
        self.provenance = provenance or {}
        if not allow_singular and not self.discriminant():
            raise CurveError("singular model (discriminant vanishes)")

    # -- constructors ----------------------------------------------------

    @classmethod
    def factored(cls, base, r, s, name: str = "", **kw) -> "WeierstrassModel":
        """y^2 = x (x - r)(x - s)."""
        r, s = base(r), base(s)
        return cls(base, 0, -(r + s), 0, r * s, 0, roots=(r, s), name=name, **kw)

    @classmethod
    def twisted_factored(cls, base, u, r, s, name: str = "", **kw) -> "WeierstrassModel":
        """u y^2 = x (x - r)(x - s), returned as Y^2 = X (X - u r)(X - u s) with X = u x, Y = u^2 y."""
        u = base(u)
        if not u:
            raise CurveError("twist parameter must be nonzero")
        prov = dict(kw.pop("provenance", {}) or {})
        prov.setdefault("twist_of", (base(r), base(s)))
        prov.setdefault("twist_by", u)
        return cls.factored(base, u * base(r), u * base(s), name=name, provenance=prov, **kw)

    @classmethod
    def short(cls, base, A, B, name: str = "", **kw) -> "WeierstrassModel":
        return cls(base, 0, 0, 0, A, B, name=name, **kw)

    # -- basic data ------------------------------------------------------

    @property
    def is_factored(self) -> bool:
        return self.roots is not None

    @property
    def two_torsion_roots(self):
        """(e1, e2, e3) with e1 = 0 for a factored model."""
        if self.roots is None:
            raise CurveError("model is not in factored form")
        return (self.base.zero, self.roots[0], self.roots[1])

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def c4(self):
        b2, b4, _, _ = self.b_invariants()
        return b2 * b2 - 24 * b4

    def c6(self):
        b2, b4, b6, _ = self.b_invariants()
        return -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def j_invariant(self):
        d = self.discriminant()
        if not d:
            raise CurveError("j-invariant of a singular model")
        c4 = self.c4()
        return c4 * c4 * c4 / d

    def invariants(self):
        """(discriminant, j, c4, c6); j is None when the discriminant vanishes."""
        d = self.discriminant()
        return d, (self.j_invariant() if d else None), self.c4(), self.c6()

    def __repr__(self):
        return f"WeierstrassModel({self.name or self.equation()})"

    def equation(self) -> str:
        if self.roots is not None:
            r, s = self.roots
            return f"y^2 = x(x - ({_fmt(r)}))(x - ({_fmt(s)}))"
        names = ("xy", "x^2", "y", "x", "")
        return "y^2 = x^3 " + " ".join(f"+ ({_fmt(c)}){n}" for c, n in zip(self.a, names) if c)

    def map_coefficients(self, fn, base=None, name=None) -> "WeierstrassModel":
        base = base or self.base
        if self.roots is not None:
            return WeierstrassModel.factored(base, fn(self.roots[0]), fn(self.roots[1]), name=name or self.name)
        return WeierstrassModel(base, *(fn(c) for c in self.a), name=name or self.name)

    def key(self) -> tuple:
        return tuple(_canon(c) for c in self.a)

    # -- points ------------------------------------------------------------

    @property
    def O(self) -> "CurvePoint":
        return InfinityPoint(self)

    def point(self, x, y, check: bool = True) -> "AffinePoint":
        P = AffinePoint(self, self.base(x), self.base(y))
        if check and not self.contains(P):
            raise CurveError(f"point ({x}, {y}) is not on the curve")
        return P

    def contains(self, P) -> bool:
        if isinstance(P, InfinityPoint):
            return True
        a1, a2, a3, a4, a6 = self.a
        x, y = P.x, P.y
        return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6

    def two_torsion_points(self):
        if self.roots is None:
            raise CurveError("model is not in factored form")
        return [self.point(self.base.zero, self.base.zero), self.point(self.roots[0], 0), self.point(self.roots[1], 0)]

    def lift_x(self, x):
        """A point with given x, or None when the right-hand side is not a square (a1 = a3 = 0 only)."""
        a1, a2, a3, a4, a6 = self.a
        if a1 or a3:
            raise CurveError("lift_x needs a1 = a3 = 0")
        x = self.base(x)
        rhs = x * x * x + a2 * x * x + a4 * x + a6
        y = self.base.sqrt(rhs)
        return None if y is None else AffinePoint(self, x, y)

    # -- group law ---------------------------------------------------------

    def add(self, P, Q):
        if P.curve is not self and P.curve.key() != self.key():
            raise CurveError("points on different curves")
        if Q.curve is not self and Q.curve.key() != self.key():
            raise CurveError("points on different curves")
        if isinstance(P, InfinityPoint):
            return Q
        if isinstance(Q, InfinityPoint):
            return P
        a1, a2, a3, a4, a6 = self.a
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return InfinityPoint(self)
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return AffinePoint(self, x3, y3)

    def neg(self, P):
        if isinstance(P, InfinityPoint):
            return P
        a1, _, a3, _, _ = self.a
        return AffinePoint(self, P.x, -P.y - a1 * P.x - a3)

    def scalar_mul(self, n: int, P):
        if n < 0:
            return self.scalar_mul(-n, self.neg(P))
        result = InfinityPoint(self)
        base = P
        while n:
            if n & 1:
                result = self.add(result, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return result

    def order_of(self, P, bound: int):
        """Order of P if it is at most ``bound``, else None."""
        Q = P
        for k in range(1, bound + 1):
            if Q.is_infinity:
                return k
            Q = self.add(Q, P)
        return None


class CurvePoint:
    curve: WeierstrassModel
    is_infinity = False

    def __add__(self, other):
        return self.curve.add(self, other)

    def __neg__(self):
        return self.curve.neg(self)

    def __sub__(self, other):
        return self.curve.add(self, self.curve.neg(other))

    def __rmul__(self, n: int):
        return self.curve.scalar_mul(n, self)

    def __mul__(self, n: int):
        return self.curve.scalar_mul(n, self)


class InfinityPoint(CurvePoint):
    is_infinity = True

    def __init__(self, curve):
        self.curve = curve

    def __eq__(self, other):
        return isinstance(other, InfinityPoint)

    def __hash__(self):
        return hash("O")

    def __repr__(self):
        return "O"


class AffinePoint(CurvePoint):
    __slots__ = ("curve", "x", "y")

    def __init__(self, curve, x, y):
        self.curve = curve
        self.x = x
        self.y = y

    def __eq__(self, other):
        return isinstance(other, AffinePoint) and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((_canon(self.x), _canon(self.y)))

    def __repr__(self):
        return f"({_fmt(self.x)}, {_fmt(self.y)})"

    def map_coefficients(self, fn):
        return AffinePoint(self.curve, fn(self.x), fn(self.y))


def _fmt(c) -> str:
    if isinstance(c, RationalFunction):
        return c.to_string()
    return str(c)


def _canon(c):
    if isinstance(c, RationalFunction):
        return (c.num.c, c.den.c)
    if isinstance(c, NFElement):
        return c.coords
    return c


# ---------------------------------------------------------------------------
# twists


def quadratic_twist(model: WeierstrassModel, u, name: str = "") -> WeierstrassModel:
    """The twist u y^2 = f(x), returned in standard form."""
    base = model.base
    u = base(u)
    if not u:
        raise CurveError("twist parameter must be nonzero")
    if model.roots is not None:
        r, s = model.roots
        return WeierstrassModel.factored(base, u * r, u * s, name=name, provenance={"twist_of": model, "twist_by": u})
    a1, a2, a3, a4, a6 = model.a
    if a1 or a3:
        # complete the square: (y + (a1 x + a3)/2)^2 = x^3 + (b2/4) x^2 + (b4/2) x + b6/4
        b2, b4, b6, _ = model.b_invariants()
        a2, a4, a6 = b2 / 4, b4 / 2, b6 / 4
    return WeierstrassModel(base, 0, u * a2, 0, u * u * a4, u * u * u * a6, name=name,
                            provenance={"twist_of": model, "twist_by": u})


def _primitive_integer_poly(pi: Poly) -> Poly:
    """Scale a monic rational polynomial to a primitive integer polynomial with positive leading coefficient."""
    import math

    if pi.field != QQ:
        return pi
    den = 1
    for c in pi.c:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in pi.c]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return Poly(QQ, [v // g for v in ints])


def twist_parameter(places, constant_field, scale=1) -> RationalFunction:
    """u = scale * prod(pi) with odd valuation exactly at the given places of P^1.

    Finite places contribute their primitive integer polynomial (over QQ);
    infinity gets odd valuation exactly when the total degree is odd.
    """
    K = constant_field
    u = Poly.constant(K, scale)
    want_inf = False
    for pl in places:
        if pl.is_infinity:
            want_inf = not want_inf
        else:
            u = u * _primitive_integer_poly(pl.poly)
    if (u.degree % 2 == 1) != want_inf:
        raise CurveError("places do not determine a twist (odd number of points)")
    return RationalFunction(u)


def twist_by_points(model: WeierstrassModel, P: Place, Q: Place | None = None, scale=1, name: str = ""):
    """Twist whose parameter has odd valuation exactly at P and Q (or at the two points of a degree-2 place P)."""
    places = [P] if Q is None else [P, Q]
    if Q is not None and P == Q:
        raise CurveError("the two places must differ")
    if sum(pl.degree for pl in places) != 2:
        raise CurveError("a twist by points needs exactly two geometric points")
    base = model.base
    if not isinstance(base, FunctionField):
        raise CurveError("twist by points needs a model over k(t)")
    u = twist_parameter(places, base.constants, scale)
    return u, quadratic_twist(model, u, name=name)


def odd_places(u: RationalFunction):
    """Places where u has odd valuation (finite ones as monic irreducibles over QQ, plus infinity)."""
    out = []
    for poly in (u.num, u.den):
        for fa in factor_rational(poly):
            if fa.multiplicity % 2:
                out.append(Place(fa.poly))
    if (u.num.degree - u.den.degree) % 2:
        out.append(Place.infinity())
    return sorted(out, key=Place.sort_key)


# ---------------------------------------------------------------------------
# isomorphism and base-change certification for factored models


def legendre_isomorphism(m1: WeierstrassModel, m2: WeierstrassModel):
    """Find (w, r, perm) with f_i = w e_perm(i) + r and w a square, i.e. m2 isomorphic to m1.

    Returns None when no such data exists.  Both models must be factored.
    """
    e = m1.two_torsion_roots
    f = m2.two_torsion_roots
    base = m1.base
    for perm in itertools.permutations(range(3)):
        d = e[perm[1]] - e[perm[0]]
        if not d:
            continue
        w = (f[1] - f[0]) / d
        r = f[0] - w * e[perm[0]]
        if w * e[perm[2]] + r == f[2] and w and base.sqrt(w) is not None:
            return w, r, perm
    return None


def twist_class_between(m1: WeierstrassModel, m2: WeierstrassModel):
    """Return w with m2 isomorphic to the twist of m1 by w (w up to squares), or None."""
    e = m1.two_torsion_roots
    f = m2.two_torsion_roots
    for perm in itertools.permutations(range(3)):
        d = e[perm[1]] - e[perm[0]]
        if not d:
            continue
        w = (f[1] - f[0]) / d
        r = f[0] - w * e[perm[0]]
        if w * e[perm[2]] + r == f[2] and w:
            return w
    return None


def base_change(model: WeierstrassModel, phi: RationalFunction, name: str = "") -> WeierstrassModel:
    """Pull back a model over k(t) along t = phi(s)."""
    if model.roots is not None:
        r, s = model.roots
        return WeierstrassModel.factored(model.base, r(phi), s(phi), name=name)
    return WeierstrassModel(model.base, *(c(phi) for c in model.a), name=name)


def double_cover_discriminant(phi: RationalFunction) -> Poly:
    """For t = phi(s) of degree 2, the discriminant in t of the quadratic satisfied by s."""
    N, D = phi.num, phi.den
    if max(N.degree, D.degree) != 2:
        raise CurveError("cover must have degree 2")
    K = N.field
    t = Poly.x(K)
    # N(s) - t D(s) = a s^2 + b s + c with a, b, c in K[t]
    coeff = [Poly.constant(K, N.coeff(k)) - t * D.coeff(k) for k in range(3)]
    c0, b, a = coeff
    return b * b - a * c0 * 4


@dataclass
class TwistCertificate:
    kind: str
    detail: dict = field(default_factory=dict)


def certify_twist(model: WeierstrassModel, twisted: WeierstrassModel, u) -> TwistCertificate:
    """Check that ``twisted`` is isomorphic to the quadratic twist of ``model`` by u, and u is not a square."""
    base = model.base
    u = base(u)
    if base.sqrt(u) is not None:
        raise CurveError("twist parameter is a square; the twist is trivial")
    if legendre_isomorphism(quadratic_twist(model, u), twisted) is None:
        raise CurveError("models are not related by the stated twist")
    return TwistCertificate("twist", {"u": u})


def certify_double_cover(model: WeierstrassModel, covered: WeierstrassModel, phi: RationalFunction,
                         twisted: WeierstrassModel) -> TwistCertificate:
    """Certify covered = model pulled back along t = phi(s), and twisted = twist of model by disc(phi).

    Then rank covered(k(s)) = rank model(k(t)) + rank twisted(k(t)).
    """
    pulled = base_change(model, phi)
    if legendre_isomorphism(pulled, covered) is None:
        raise CurveError("covered model is not the pullback along the cover")
    disc = model.base(double_cover_discriminant(phi))
    w = twist_class_between(model, twisted)
    if w is None or model.base.sqrt(w / disc) is None:
        raise CurveError("twisted model is not the twist by the cover discriminant")
    if model.base.sqrt(disc) is not None:
        raise CurveError("cover discriminant is a square")
    return TwistCertificate("double_cover", {"phi": phi, "discriminant": disc})


# ---------------------------------------------------------------------------
# specialization, scaling, reduction


def specialize(model: WeierstrassModel, t0, point=None):
    """Substitute t = t0 in a model over k(t) (and optionally a section)."""
    K = model.base.constants
    t0 = K(t0)

    def ev(c):
        if c.den(t0) == 0:
            raise CurveError(f"t = {t0} is a pole of a coefficient")
        return c(t0)

    if model.roots is not None:
        spec = WeierstrassModel.factored(K, ev(model.roots[0]), ev(model.roots[1]), allow_singular=True)
    else:
        spec = WeierstrassModel(K, *(ev(c) for c in model.a), allow_singular=True)
    if not spec.discriminant():
        disc = model.discriminant()
        vanishing = None
        if K == QQ:
            for fa in factor_rational(disc.num):
                if fa.poly(t0) == 0:
                    vanishing = fa.poly
                    break
        raise CurveError(f"singular specialization at t = {t0}; vanishing factor {vanishing.to_string() if vanishing else '?'}")
    if point is None:
        return spec
    if point.is_infinity:
        return spec, spec.O
    return spec, spec.point(ev(point.x), ev(point.y))


def scale_to_triple(point, triple, inverse: bool = False):
    """(x, y) -> (x (a - c)^2 / 4, y (c - a)^3 / 8) from E_t (t = b/(c - a)) to y^2 = x(x - a^2)(x - b^2)."""
    a, b, c = (Fraction(v) for v in triple)
    if a == c:
        raise CurveError("a = c is excluded")
    target = WeierstrassModel.factored(QQ, a * a, b * b, name=f"E{tuple(triple)}")
    t = b / (c - a)
    source = WeierstrassModel.factored(QQ, (t * t - 1) ** 2, 4 * t * t, name=f"E_t(t={t})")
    sx, sy = (a - c) ** 2 / 4, (c - a) ** 3 / 8
    if inverse:
        if point.is_infinity:
            return source.O
        return source.point(point.x / sx, point.y / sy)
    if point.is_infinity:
        return target.O
    return target.point(point.x * sx, point.y * sy)


def reduce_coefficient(c, p: int, root: int | None, Fp):
    """Reduce a rational, number-field element, polynomial or rational function modulo p."""
    if isinstance(c, RationalFunction):
        num = reduce_coefficient(c.num, p, root, Fp)
        den = reduce_coefficient(c.den, p, root, Fp)
        if not den:
            raise CurveError(f"denominator vanishes mod {p}")
        return RationalFunction(num, den)
    if isinstance(c, Poly):
        return Poly(Fp, [reduce_coefficient(a, p, root, Fp) for a in c.c])
    if isinstance(c, NFElement):
        if root is None:
            raise CurveError("number-field coefficients need a residue-field embedding")
        return Fp(c.field.reduce_mod(c, p, root))
    c = Fraction(c)
    if c.denominator % p == 0:
        raise CurveError(f"denominator divisible by {p}")
    return Fp(c)


def reduce_mod_p(model: WeierstrassModel, p: int, root: int | None = None, name: str = "") -> WeierstrassModel:
    """Coefficient-wise reduction of a model over K(t) to F_p(t)."""
    from .finite_fields import PrimeField

    if p in (2, 3):
        raise CurveError("characteristic 2 and 3 are excluded")
    Fp = PrimeField(p)
    target = FunctionField(Fp) if isinstance(model.base, FunctionField) else Fp
    red = lambda c: reduce_coefficient(c, p, root, Fp)
    try:
        if model.roots is not None:
            out = WeierstrassModel.factored(target, red(model.roots[0]), red(model.roots[1]), name=name or model.name,
                                            allow_singular=True)
        else:
            out = WeierstrassModel(target, *(red(c) for c in model.a), name=name or model.name, allow_singular=True)
    except ZeroDivisionError as exc:
        raise CurveError(str(exc)) from exc
    if not out.discriminant():
        raise CurveError(f"generic fiber has bad reduction mod {p} (discriminant vanishes identically)")
    out.provenance = {"reduced_from": model, "p": p, "root": root}
    return out


def number_field_root_mod(field: NumberField, p: int, index: int = 0) -> int:
    roots = field.embeddings_mod(p)
    if not roots:
        raise CurveError(f"modulus has no root mod {p}")
    return roots[index]
