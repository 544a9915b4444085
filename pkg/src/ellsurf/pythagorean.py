"""Pythagorean triples, their equivalence classes and the curves y^2 = x(x - a^2)(x - b^2)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import sympy

from .exact_algebra.fields import QQ
from .weierstrass import CurveError, WeierstrassModel


class TripleError(ValueError):
    pass


@dataclass(frozen=True)
class Triple:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a * self.a + self.b * self.b != self.c * self.c:
            raise TripleError(f"{self.as_tuple()} is not Pythagorean")

    def as_tuple(self):
        return (self.a, self.b, self.c)

    @property
    def nondegenerate(self) -> bool:
        return self.a != 0 and self.b != 0

    def curve(self) -> WeierstrassModel:
        return WeierstrassModel.factored(QQ, self.a ** 2, self.b ** 2, name=f"E{self.as_tuple()}")


@dataclass(frozen=True)
class TripleClass:
    representative: Triple
    t: Fraction

    def orbit(self):
        return t_orbit(self.t)


def _require_T(tr: Triple):
    if not tr.nondegenerate:
        raise TripleError(f"{tr.as_tuple()} has ab = 0")


def canonicalize(tr: Triple) -> TripleClass:
    """Primitive representative with a odd, b even, all entries positive."""
    _require_T(tr)
    a, b, c = abs(tr.a), abs(tr.b), abs(tr.c)
    g = gcd(gcd(a, b), c)
    a, b, c = a // g, b // g, c // g
    if b % 2:
        a, b = b, a
    rep = Triple(a, b, c)
    return TripleClass(rep, Fraction(b, c - a))


def classify(t1: Triple, t2: Triple) -> bool:
    return canonicalize(t1).representative == canonicalize(t2).representative


def t_orbit(t) -> list[Fraction]:
    """Images of t under {+-t, +-1/t, +-(1+t)/(1-t), +-(1-t)/(1+t)}."""
    t = Fraction(t)
    if t in (0, 1, -1):
        raise TripleError("t must avoid 0, 1, -1")
    g = (1 + t) / (1 - t)
    return [t, -t, 1 / t, -1 / t, g, -g, 1 / g, -1 / g]


def triple_from_parameter(t) -> Triple:
    """p/q -> (p^2 - q^2, 2pq, p^2 + q^2)."""
    t = Fraction(t)
    if t in (0, 1, -1):
        raise TripleError("t must avoid 0, 1, -1")
    p, q = t.numerator, t.denominator
    return Triple(p * p - q * q, 2 * p * q, p * p + q * q)


def parameter_from_triple(tr: Triple) -> Fraction:
    if tr.a == tr.c:
        raise TripleError("a = c is excluded")
    return Fraction(tr.b, tr.c - tr.a)


def param_roundtrip(x):
    """Triple -> t = b/(c - a), or rational t -> triple."""
    if isinstance(x, Triple):
        return parameter_from_triple(x)
    return triple_from_parameter(x)


def legendre_lambda(t) -> Fraction:
    t = Fraction(t)
    return (2 * t / (t * t - 1)) ** 2


def ratio_identities(t):
    """(a/c, b/c) = ((t^2 - 1)/(t^2 + 1), 2t/(t^2 + 1))."""
    t = Fraction(t)
    return (t * t - 1) / (t * t + 1), 2 * t / (t * t + 1)


@dataclass(frozen=True)
class SMembership:
    p: int
    q: int
    u: Fraction
    P: int
    Q: int
    k: int
    triple: Triple


def s_membership(p: int, q: int) -> SMembership:
    """Triple (P^2 - Q^2, 2PQ, P^2 + Q^2) with P/Q = 2pq/(p^2 + 5q^2) in lowest terms."""
    if q == 0:
        raise TripleError("q must be nonzero")
    if p == 0:
        raise TripleError("degenerate: p = 0 gives b = 0")
    num, den = 2 * p * q, p * p + 5 * q * q
    k = gcd(num, den)
    u = Fraction(num, den)
    P, Q = u.numerator, u.denominator
    tr = Triple(P * P - Q * Q, 2 * P * Q, P * P + Q * Q)
    _require_T(tr)
    return SMembership(p, q, u, P, Q, k, tr)


# ---------------------------------------------------------------------------
# points and non-torsion certificates


def _good_primes(tr: Triple, count: int, start: int = 3):
    bad = 2 * tr.a * tr.b * tr.c * (tr.a * tr.a - tr.b * tr.b)
    out = []
    p = start
    while len(out) < count:
        p = sympy.nextprime(p)
        if bad % p:
            out.append(p)
    return out


def _reduce(v: Fraction, p: int):
    if v.denominator % p == 0:
        return None
    return v.numerator * pow(v.denominator, -1, p) % p


def order_mod_p(curve: WeierstrassModel, P, p: int) -> int | None:
    """Order of the reduction of P on y^2 = x^3 + a2 x^2 + a4 x mod p (None if P reduces to O)."""
    _, a2, _, a4, _ = (_reduce(c, p) for c in curve.a)
    if P.is_infinity:
        return 1
    x0, y0 = _reduce(P.x, p), _reduce(P.y, p)
    if x0 is None or y0 is None:
        return None

    def add(A, B):
        if A is None:
            return B
        if B is None:
            return A
        (x1, y1), (x2, y2) = A, B
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return None
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4) * pow(2 * y1, -1, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (lam * lam - a2 - x1 - x2) % p
        return x3, (lam * (x1 - x3) - y1) % p

    R = (x0, y0)
    n = 1
    while R is not None:
        R = add(R, (x0, y0))
        n += 1
    return n


MAZUR_MAX = 12


def is_non_torsion(curve: WeierstrassModel, P, primes) -> tuple[bool, str]:
    """Decide whether a rational point has infinite order.

    Torsion injects into E(F_p) at odd good primes, so different reduction
    orders prove infinite order.  Otherwise the common order m is checked
    exactly (m > 12 is impossible for torsion over QQ).
    """
    if P.is_infinity:
        return False, "identity"
    orders = [order_mod_p(curve, P, p) for p in primes]
    if len(set(orders)) > 1:
        return True, f"reduction orders {dict(zip(primes, orders))}"
    m = orders[0]
    if m > MAZUR_MAX:
        return True, f"reduction order {m} exceeds {MAZUR_MAX}"
    if curve.scalar_mul(m, P).is_infinity:
        return False, f"{m}P = O"
    return True, f"{m}P != O while every reduction has order {m}"


@dataclass
class ExplicitPoints:
    membership: SMembership
    curve: WeierstrassModel
    Q1: object
    Q2: object
    degenerate: bool
    non_torsion: dict
    minus_two_q1: object
    provenance: str = "images of P2 and P3 on E3 under (x, y) -> (x (a-c)^2/4, y (c-a)^3/8)"


def explicit_points(s: SMembership, primes=None) -> ExplicitPoints:
    a, b, c = (Fraction(v) for v in s.triple.as_tuple())
    E = s.triple.curve()
    x1 = (a + b - c) ** 2 / 2
    y1 = (a + b) * (a + b - c) ** 2 / 2
    x2 = a * (a - c) / 2
    y2 = a * b * Fraction(s.p ** 4 - 25 * s.q ** 4, s.k ** 2) / 2
    try:
        Q1 = E.point(x1, y1)
        Q2 = E.point(x2, y2)
    except CurveError as exc:
        raise CurveError(f"explicit point off the curve for {s.triple.as_tuple()}: {exc}") from None
    primes = primes or _good_primes(s.triple, 2)
    nt = {"Q1": is_non_torsion(E, Q1, primes), "Q2": is_non_torsion(E, Q2, primes)}
    degenerate = Q2 == Q1 or Q2 == E.neg(Q1)
    if not degenerate:
        # Q2 = +-Q1 + torsion
        for S in (E.add(Q2, E.neg(Q1)), E.add(Q2, Q1)):
            if not is_non_torsion(E, S, primes)[0]:
                degenerate = True
    m2 = E.neg(E.scalar_mul(2, Q1))
    return ExplicitPoints(s, E, Q1, Q2, degenerate, nt, m2)


@dataclass
class SearchRow:
    p: int
    q: int
    triple: Triple
    canonical: Triple
    t: Fraction
    u: Fraction
    points: ExplicitPoints
    rank_lower_bound: int


@dataclass
class SearchReport:
    rows: list = field(default_factory=list)
    classes: dict = field(default_factory=dict)

    @property
    def class_count(self) -> int:
        return len(self.classes)


def search_report(p_range, q_range) -> SearchReport:
    """Enumerate (p, q), group by triple class and attach point evidence.

    The rank bound 2 is reported when both points have infinite order and
    Q2 differs from +-Q1 modulo torsion; independence itself is not certified.
    """
    rep = SearchReport()
    for p in p_range:
        for q in q_range:
            if p == 0 or q == 0:
                continue
            s = s_membership(p, q)
            cls = canonicalize(s.triple)
            pts = explicit_points(s)
            both = all(v[0] for v in pts.non_torsion.values())
            bound = 2 if both and not pts.degenerate else 1
            row = SearchRow(p, q, s.triple, cls.representative, cls.t, s.u, pts, bound)
            rep.rows.append(row)
            key = cls.representative.as_tuple()
            rep.classes.setdefault(key, []).append(row)
    return rep
