"""Fiber types of elliptic surfaces over P^1 and the surface invariants they determine.

Two routes classify a place v:

* factored models y^2 = x(x - r)(x - s) in odd residue characteristic use the
  valuations of the three root differences (Legendre route), which also
  gives the node position and splitness directly;
* general models go through (v(c4), v(c6), v(disc)) after minimalization
  (residue characteristic at least 5).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from .exact_algebra.factor import factor_rational
from .exact_algebra.fields import QQ
from .exact_algebra.poly import FunctionField, Poly, RationalFunction
from .weierstrass import CurveError, Place, WeierstrassModel, reduce_mod_p

EULER = {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}
COMPONENTS = {"II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8, "II*": 9}
GROUPS = {"II": (), "III": (2,), "IV": (3,), "IV*": (3,), "III*": (2,), "II*": ()}


@dataclass(frozen=True)
class KodairaFiber:
    place: Place
    kind: str  # "I", "I*", or one of II, III, IV, IV*, III*, II*
    n: int = 0
    split: bool | None = None
    residue_degree: int = 1
    shift: int = 0  # the roots (or a-invariants) were scaled by pi^(-2 shift) (resp. weights) for minimality
    collision: tuple | None = None  # Legendre route: indices of the roots that meet (e1 = 0, e2 = r, e3 = s)
    valuations: tuple = ()
    frobenius_action: tuple | None = None  # permutation of components at the residue field level

    @property
    def type(self) -> str:
        if self.kind == "I":
            return f"I{self.n}"
        if self.kind == "I*":
            return f"I{self.n}*"
        return self.kind

    @property
    def is_good(self) -> bool:
        return self.kind == "I" and self.n == 0

    @property
    def multiplicative(self) -> bool:
        return self.kind == "I" and self.n > 0

    @property
    def additive(self) -> bool:
        return not self.kind == "I"

    @property
    def m_v(self) -> int:
        if self.kind == "I":
            return max(self.n, 1)
        if self.kind == "I*":
            return self.n + 5
        return COMPONENTS[self.kind]

    @property
    def e_v(self) -> int:
        if self.kind == "I":
            return self.n
        if self.kind == "I*":
            return self.n + 6
        return EULER[self.kind]

    @property
    def component_group(self) -> tuple:
        """Invariant factors of the component group."""
        if self.kind == "I":
            return (self.n,) if self.n > 1 else ()
        if self.kind == "I*":
            return (2, 2) if self.n % 2 == 0 else (4,)
        return GROUPS[self.kind]

    def group_label(self) -> str:
        g = self.component_group
        if not g:
            return "0"
        if g == (2, 2):
            return "(Z/2Z)^2"
        return " x ".join(f"Z/{k}Z" for k in g)

    def __repr__(self):
        s = "" if self.split is None else (" split" if self.split else " non-split")
        return f"KodairaFiber({self.place.label()}: {self.type}{s})"


def _val(f, place: Place) -> int:
    """Valuation of a rational function (or Poly) at a place of P^1."""
    if isinstance(f, Poly):
        f = RationalFunction(f)
    if f.is_zero():
        return 10 ** 9
    if place.is_infinity:
        return f.den.degree - f.num.degree
    return f.num.order_at(place.poly) - f.den.order_at(place.poly)


def _residue(f: RationalFunction, place: Place, shift_val: int):
    """Residue class of f * pi^(-shift_val) where v(f) = shift_val; returns a Poly modulo place (or a constant at infinity)."""
    if place.is_infinity:
        # pi = 1/t; leading behaviour lc(num)/lc(den) t^(deg num - deg den)
        return f.num.lc / f.den.lc
    pi = place.poly
    k1, n = f.num.strip_factor(pi)
    k2, d = f.den.strip_factor(pi)
    assert k1 - k2 == shift_val
    from .exact_algebra.poly import xgcd

    g, s, _ = xgcd(d % pi, pi)
    return (n * s) % pi


def _is_square_residue(value, place: Place, K) -> bool | None:
    """Squareness of a nonzero residue in the residue field of the place (None if not decided)."""
    if place.is_infinity or place.poly.degree == 1:
        if isinstance(value, Poly):
            value = value.coeff(0)
        return K.sqrt(value) is not None
    if K.characteristic:
        p = K.characteristic
        d = place.poly.degree
        from .finite_fields import _powmod

        r = _powmod(value, (p ** d - 1) // 2, place.poly)
        return r == Poly.constant(K, 1)
    return None


def legendre_fiber(model: WeierstrassModel, place: Place) -> KodairaFiber:
    base = model.base
    K = base.constants
    e = [base.zero, model.roots[0], model.roots[1]]
    pairs = [(0, 1), (0, 2), (1, 2)]
    diffs = [e[j] - e[i] for i, j in pairs]
    vals = [_val(d, place) for d in diffs]
    mn = min(vals)
    k = mn // 2
    sv = [v - 2 * k for v in vals]
    mn0 = mn - 2 * k
    deg = place.degree
    if mn0 == 0:
        pos = [i for i, v in enumerate(sv) if v > 0]
        if not pos:
            return KodairaFiber(place, "I", 0, residue_degree=deg, shift=k, valuations=tuple(vals))
        (idx,) = pos
        n = 2 * sv[idx]
        i, j = pairs[idx]
        other = 3 - i - j
        # node at x = e_i = e_j; split iff (e_i - e_other) is a square in the residue field
        w = e[i] - e[other]
        res = _residue(w, place, 2 * k)
        split = _is_square_residue(res, place, K)
        action = None
        if split is not None:
            action = tuple(range(n)) if split else tuple((-c) % n for c in range(n))
        return KodairaFiber(place, "I", n, split=split, residue_degree=deg, shift=k, collision=(i, j),
                            valuations=tuple(vals), frobenius_action=action)
    # mn0 == 1: sorted shifted valuations are (1, 1, r)
    r = max(sv)
    n = 2 * r - 2
    idx = sv.index(r) if sv.count(r) == 1 else None
    coll = pairs[idx] if idx is not None and r > 1 else None
    # with all 2-torsion rational every component is defined over the residue field
    action = tuple(range(n + 5))
    return KodairaFiber(place, "I*", n, split=True, residue_degree=deg, shift=k, collision=coll,
                        valuations=tuple(vals), frobenius_action=action)


def general_fiber(model: WeierstrassModel, place: Place) -> KodairaFiber:
    """Tate classification from (v(c4), v(c6), v(disc)) in residue characteristic >= 5."""
    base = model.base
    K = base.constants
    if K.characteristic in (2, 3):
        raise CurveError("residue characteristic 2 or 3 not supported")
    c4, c6, D = model.c4(), model.c6(), model.discriminant()
    v4, v6, vd = _val(c4, place), _val(c6, place), _val(D, place)
    k = 0
    # global minimalization by pi^(+-1): c4 -> pi^-4k c4, c6 -> pi^-6k c6, D -> pi^-12k D
    while v4 - 4 * k >= 4 and v6 - 6 * k >= 6 and vd - 12 * k >= 12:
        k += 1
    while v4 - 4 * k < 0 or v6 - 6 * k < 0 or vd - 12 * k < 0:
        k -= 1
    a, b, d = v4 - 4 * k, v6 - 6 * k, vd - 12 * k
    deg = place.degree
    vals = (v4, v6, vd)
    if d == 0:
        return KodairaFiber(place, "I", 0, residue_degree=deg, shift=k, valuations=vals)
    if a == 0:
        res = _residue(-c6, place, 6 * k)
        split = _is_square_residue(res, place, K)
        action = None
        if split is not None:
            action = tuple(range(d)) if split else tuple((-c) % d for c in range(d))
        return KodairaFiber(place, "I", d, split=split, residue_degree=deg, shift=k, valuations=vals,
                            frobenius_action=action)
    if a == 2 and b == 3 and d > 6:
        return KodairaFiber(place, "I*", d - 6, residue_degree=deg, shift=k, valuations=vals)
    table = {2: "II", 3: "III", 4: "IV", 6: "I*", 8: "IV*", 9: "III*", 10: "II*"}
    if d not in table:
        raise CurveError(f"unexpected valuation data {vals} at {place.label()}")
    kind = table[d]
    if kind == "I*":
        return KodairaFiber(place, "I*", 0, residue_degree=deg, shift=k, valuations=vals)
    trivial = kind in ("II", "III", "III*", "II*")
    return KodairaFiber(place, kind, 0, split=True if trivial else None, residue_degree=deg, shift=k, valuations=vals,
                        frobenius_action=tuple(range(COMPONENTS[kind])) if trivial else None)


def tate_fiber_analysis(model: WeierstrassModel, place: Place) -> KodairaFiber:
    """Kodaira type, component data and splitness of the fiber at a place of P^1."""
    if not isinstance(model.base, FunctionField):
        raise CurveError("fiber analysis needs a model over k(t)")
    if model.base.characteristic == 2:
        raise CurveError("odd characteristic required")
    if model.roots is not None:
        return legendre_fiber(model, place)
    return general_fiber(model, place)


# ---------------------------------------------------------------------------
# places of bad reduction


def candidate_polys(model: WeierstrassModel):
    if model.roots is not None:
        r, s = model.roots
        fs = [r, s, r - s]
    else:
        fs = [model.discriminant()]
    out = []
    for f in fs:
        out.append(f.num)
        out.append(f.den)
    return out


def bad_places(model: WeierstrassModel, supplied=None):
    """Places with non-good fibers (finite places from factorization, plus infinity if bad)."""
    K = model.base.constants
    irreducibles = {}
    for f in candidate_polys(model):
        if f.degree <= 0:
            continue
        if K == QQ:
            facs = [fa.poly for fa in factor_rational(f, candidates=supplied)]
        elif K.characteristic and getattr(K, "degree", 1) == 1:
            from .finite_fields import factor_fp

            facs = [g for g, _ in factor_fp(f)]
        else:
            raise CurveError("bad places over this constant field need supplied places")
        for g in facs:
            irreducibles[g.c] = g
    places = [Place(g) for g in irreducibles.values()] + [Place.infinity()]
    out = []
    for pl in places:
        fib = tate_fiber_analysis(model, pl)
        if not fib.is_good:
            out.append(fib)
    return sorted(out, key=lambda f: f.place.sort_key())


@dataclass
class SurfaceInvariants:
    e: int
    chi: int
    kodaira_dim: str
    b2: int
    trivial_rank: int
    torsion_bound: tuple
    fibers: list = field(default_factory=list)

    def as_dict(self):
        return {
            "euler_number": self.e, "chi": self.chi, "kodaira_dimension": self.kodaira_dim, "b2": self.b2,
            "trivial_rank": self.trivial_rank,
            "torsion_bound": "x".join(f"Z/{n}" for n in self.torsion_bound) or "0",
        }


def fiber_configuration(model: WeierstrassModel, supplied=None):
    return bad_places(model, supplied)


def torsion_injection_bound(fibers) -> tuple:
    """Product of component groups over all geometric singular fibers, as a sorted tuple of cyclic orders."""
    out = []
    for f in fibers:
        for _ in range(f.place.degree):
            out.extend(f.component_group)
    return tuple(sorted(out, reverse=True))


def surface_invariants(model: WeierstrassModel, fibers=None, supplied=None) -> SurfaceInvariants:
    if fibers is None:
        fibers = bad_places(model, supplied)
    e = sum(f.e_v * f.place.degree for f in fibers)
    if e <= 0 or e % 12:
        raise CurveError("fiber configuration inconsistent")
    chi = e // 12
    kd = {1: "-inf", 2: "0"}.get(chi, "1")
    trivial = 2 + sum((f.m_v - 1) * f.place.degree for f in fibers)
    return SurfaceInvariants(e, chi, kd, e - 2, trivial, torsion_injection_bound(fibers), list(fibers))


def geometric_configuration(fibers) -> Counter:
    """Multiset of fiber types over the algebraic closure."""
    c = Counter()
    for f in fibers:
        c[(f.type, f.m_v)] += f.place.degree
    return c


@dataclass
class GoodReductionReport:
    ok: bool
    p: int
    char0: dict
    modp: dict
    residue_degrees_char0: dict
    residue_degrees_modp: dict
    mismatches: list

    def summary(self) -> str:
        if self.ok:
            return f"good reduction at {self.p}: fiber configuration preserved"
        return f"configuration changes mod {self.p}: " + "; ".join(self.mismatches)


def verify_good_reduction(model: WeierstrassModel, p: int, root: int | None = None, supplied=None):
    """Compare the geometric fiber configuration in characteristic 0 and modulo p."""
    red = reduce_mod_p(model, p, root)
    f0 = bad_places(model, supplied)
    fp = bad_places(red)
    c0, cp = geometric_configuration(f0), geometric_configuration(fp)
    mism = []
    for key in sorted(set(c0) | set(cp)):
        if c0.get(key, 0) != cp.get(key, 0):
            mism.append(f"{key[0]}: {c0.get(key, 0)} geometric fibers in char 0, {cp.get(key, 0)} mod {p}")
    rd0 = Counter((f.type, f.place.degree) for f in f0)
    rdp = Counter((f.type, f.place.degree) for f in fp)
    rep = GoodReductionReport(not mism, p, {k[0]: v for k, v in c0.items()}, {k[0]: v for k, v in cp.items()},
                              {f"{k[0]}@deg{k[1]}": v for k, v in rd0.items()},
                              {f"{k[0]}@deg{k[1]}": v for k, v in rdp.items()}, mism)
    return rep.ok, rep


def fiber_table(fibers, var: str = "t"):
    """Rows (place, type, component group) in the order of the place sort key."""
    return [(f.place.label(var), f.type, f.group_label()) for f in fibers]
