"""Mordell-Weil lattices of elliptic surfaces y^2 = x(x - r)(x - s) over K(t).

Heights use Shioda's formula h(P) = 2 chi + 2 (P.O) - sum_v contr_v(P) and
the pairing is obtained by polarization, <P, Q> = (h(P + Q) - h(P) - h(Q)) / 2.
Local data at a place is read on the minimal model there (roots and x scaled
by pi^(-2k)).  Places over K are never factored: each rational place is cut
into pieces by gcds with the section data until every quantity has constant
valuation on the roots of each piece.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .exact_algebra.fields import QQ, NFElement, squarefree_integer_part
from .exact_algebra.galois import FieldAutomorphism, galois_conjugate, power_automorphism
from .exact_algebra.poly import FunctionField, Poly, RationalFunction, gcd
from .exact_algebra.squares import SquareClass, is_square
from .kodaira import KodairaFiber, candidate_polys, surface_invariants, tate_fiber_analysis
from .exact_algebra.factor import factor_rational
from .weierstrass import Place, TwistCertificate, WeierstrassModel


class MordellWeilError(ValueError):
    pass


@dataclass(frozen=True)
class Section:
    point: object
    name: str = ""

    @property
    def x(self):
        return self.point.x

    @property
    def y(self):
        return self.point.y


def _pt(P):
    return P.point if isinstance(P, Section) else P


# ---------------------------------------------------------------------------
# rational descent of coefficients


def _rational_rf(f: RationalFunction):
    """The same rational function over QQ, or None if some coefficient is irrational."""
    out = []
    for poly in (f.num, f.den):
        cs = []
        for c in poly.c:
            if isinstance(c, NFElement):
                if not c.is_rational():
                    return None
                cs.append(c.coords[0])
            else:
                cs.append(Fraction(c))
        out.append(Poly(QQ, cs))
    return RationalFunction(*out)


def rational_model(model: WeierstrassModel) -> WeierstrassModel | None:
    if model.base.constants == QQ:
        return model
    if model.roots is None:
        return None
    r, s = (_rational_rf(c) for c in model.roots)
    if r is None or s is None:
        return None
    QT = FunctionField(QQ, model.base.var) if hasattr(model.base, "var") else FunctionField(QQ)
    return WeierstrassModel.factored(QT, r, s, name=model.name)


# ---------------------------------------------------------------------------
# place refinement


def _split(g: Poly, F: Poly):
    """Split squarefree g into pieces on whose roots v(F) is constant; yields (piece, v)."""
    if F.is_zero():
        return [(g, None)]
    h = gcd(g, F)
    if h.degree <= 0:
        return [(g, 0)]
    out = []
    rest = g.exact_div(h)
    if rest.degree > 0:
        out.append((rest.monic(), 0))
    for piece, v in _split(h, F.exact_div(h)):
        out.append((piece, None if v is None else v + 1))
    return out


def refine_place(pi: Poly, polys) -> list[Poly]:
    """Pieces of the squarefree pi such that every polynomial in ``polys`` has constant valuation on each piece."""
    pieces = [pi.monic()]
    for F in polys:
        nxt = []
        for g in pieces:
            nxt.extend(p for p, _ in _split(g, F))
        pieces = nxt
    return pieces


def _v(f: RationalFunction, g: Poly | None) -> int | float:
    if f.is_zero():
        return float("inf")
    if g is None:
        return f.den.degree - f.num.degree
    return f.num.order_at(g) - f.den.order_at(g)


# ---------------------------------------------------------------------------
# heights


def local_contribution(fiber: KodairaFiber, vx: int, vdiff: tuple) -> Fraction:
    """contr_v for a section with v(x') = vx and v(x' - e_i') = vdiff[i] on the minimal model.

    e_0 = 0, e_1 = r, e_2 = s.  I_n: component k = min(v(x'-e_i), v(x'-e_j), n/2)
    for the colliding pair (i, j), contribution k(n-k)/n.  I_n*: the isolated
    root leads to the near component (1), the colliding pair to the far
    components (1 + n/4).
    """
    if vx < 0 or fiber.is_good:
        return Fraction(0)
    n = fiber.n
    if fiber.kind == "I":
        i, j = fiber.collision
        k = min(vdiff[i], vdiff[j], n // 2)
        if k <= 0:
            return Fraction(0)
        return Fraction(k * (n - k), n)
    if fiber.kind == "I*":
        if vx == 0:
            return Fraction(0)
        if n == 0:
            return Fraction(1)
        i, j = fiber.collision
        iso = 3 - i - j
        if vdiff[iso] >= 2:
            return Fraction(1)
        return 1 + Fraction(n, 4)
    raise MordellWeilError(f"no contribution table for fiber type {fiber.type}")


@dataclass
class HeightData:
    height: Fraction
    PO: Fraction
    contributions: list


class HeightPairing:
    """Shioda height pairing on a factored model over K(t) whose roots have rational coefficients."""

    def __init__(self, model: WeierstrassModel, chi: int | None = None):
        if model.roots is None:
            raise MordellWeilError("height pairing implemented for factored models")
        self.model = model
        self.K = model.base.constants
        qm = rational_model(model)
        if qm is None:
            raise MordellWeilError("model roots must have rational coefficients")
        self.qmodel = qm
        places = {}
        for f in candidate_polys(qm):
            if f.degree > 0:
                for fa in factor_rational(f):
                    places[fa.poly.c] = fa.poly
        self.places = [Place(g) for g in places.values()] + [Place.infinity()]
        self.fibers = {pl: tate_fiber_analysis(qm, pl) for pl in self.places}
        bad = [f for f in self.fibers.values() if not f.is_good]
        self.invariants = surface_invariants(qm, bad)
        self.chi = self.invariants.chi if chi is None else chi
        self._cache: dict = {}

    def _to_K(self, g: Poly) -> Poly:
        if self.K == QQ:
            return g
        return g.map_coeffs(lambda c: self.K(c), field=self.K)

    def height_data(self, P) -> HeightData:
        P = _pt(P)
        if P.is_infinity:
            return HeightData(Fraction(0), Fraction(0), [])
        key = (P.x, P.y)
        if key in self._cache:
            return self._cache[key]
        x = P.x
        e = [self.model.base.zero, self.model.roots[0], self.model.roots[1]]
        diffs = [x - ei for ei in e]
        total_contr = Fraction(0)
        contribs = []
        PO = Fraction(0)
        special_den = 0
        for pl, fib in self.fibers.items():
            k = fib.shift
            if pl.is_infinity:
                pieces = [None]
            else:
                polys = [x.num, x.den] + [d.num for d in diffs] + [d.den for d in diffs]
                pieces = refine_place(self._to_K(pl.poly), polys)
            for g in pieces:
                deg = 1 if g is None else g.degree
                vx = _v(x, g) - 2 * k
                if g is not None:
                    special_den += deg * x.den.order_at(g)
                if vx < 0:
                    PO += Fraction(-vx, 2) * deg
                    continue
                vd = tuple(_v(d, g) - 2 * k for d in diffs)
                c = local_contribution(fib, vx, vd)
                if c:
                    contribs.append((pl.label(), fib.type, c, deg))
                    total_contr += c * deg
        PO += Fraction(x.den.degree - special_den, 2)
        h = 2 * self.chi + 2 * PO - total_contr
        if h < 0:
            raise MordellWeilError("negative height: component identification inconsistent")
        out = HeightData(h, PO, contribs)
        self._cache[key] = out
        return out

    def height(self, P) -> Fraction:
        return self.height_data(P).height

    def pair(self, P, Q) -> Fraction:
        P, Q = _pt(P), _pt(Q)
        if P == Q:
            return self.height(P)
        S = self.model.add(P, Q)
        return (self.height(S) - self.height(P) - self.height(Q)) / 2

    def gram(self, points, scale: int = 1) -> "HeightGram":
        pts = [_pt(p) for p in points]
        n = len(pts)
        M = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                v = self.pair(pts[i], pts[j]) * scale
                M[i][j] = M[j][i] = v
        return HeightGram(tuple(tuple(r) for r in M), scale)


def height_pairing(model: WeierstrassModel, P, Q) -> Fraction:
    return HeightPairing(model).pair(P, Q)


@dataclass(frozen=True)
class HeightGram:
    matrix: tuple
    scale: int = 1

    def det(self) -> Fraction:
        return Fraction(sympy.Matrix(self.matrix).det())

    def rescaled(self, scale: int) -> "HeightGram":
        f = Fraction(scale, self.scale)
        return HeightGram(tuple(tuple(v * f for v in r) for r in self.matrix), scale)


def gram_index_bound(gram: HeightGram):
    """(det, admissible indices n with n^2 | det) for an integral Gram matrix."""
    D = gram.det()
    if D == 0:
        raise MordellWeilError("dependent generators")
    if D.denominator != 1:
        raise MordellWeilError("Gram matrix is not integral at this scale")
    D = abs(int(D))
    ns = [n for n in sympy.divisors(D) if D % (n * n) == 0]
    return D, ns


# ---------------------------------------------------------------------------
# 2-descent


def two_descent_image(model: WeierstrassModel, P, e1_index: int = 0, e2_index: int = 2):
    """(x - e1, x - e2) as square classes; 2-torsion points use the standard substitutes.

    Roots are indexed e_0 = 0, e_1 = r, e_2 = s.
    """
    P = _pt(P)
    base = model.base
    e = [base.zero, model.roots[0], model.roots[1]]
    e1, e2 = e[e1_index], e[e2_index]
    e3 = e[3 - e1_index - e2_index]
    if P.is_infinity:
        one = SquareClass.one(base.constants)
        return one, one
    x = P.x
    if x == e1:
        a, b = (e1 - e2) * (e1 - e3), e1 - e2
    elif x == e2:
        a, b = e2 - e1, (e2 - e1) * (e2 - e3)
    else:
        a, b = x - e1, x - e2
    return SquareClass.of(a), SquareClass.of(b)


def _coprime_base(polys):
    base: list[Poly] = []
    for f in polys:
        f = f.monic()
        if f.degree <= 0:
            continue
        i = 0
        while i < len(base) and f.degree > 0:
            g = gcd(f, base[i])
            if g.degree > 0:
                b = base[i]
                rest = b.exact_div(g).monic()
                base[i] = g
                if rest.degree > 0:
                    base.append(rest)
                f = f.exact_div(g).monic()
            i += 1
        if f.degree > 0:
            base.append(f)
    return base


def _class_vectors(pairs, mode: str = "geometric"):
    """Encode pairs of square classes as bit vectors over a coprime base (plus content bits in rational mode)."""
    polys = [c.poly for pair in pairs for c in pair]
    base = _coprime_base(polys)
    primes = []
    if mode == "rational":
        for pair in pairs:
            for c in pair:
                v = int(squarefree_integer_part(int(c.content))) if c.field == QQ else None
                if v is None:
                    raise MordellWeilError("rational mode needs classes over QQ(t)")
                for p in sympy.primefactors(abs(v)):
                    if p not in primes:
                        primes.append(p)
    width = len(base) + (len(primes) + 1 if mode == "rational" else 0)
    vecs = []
    for pair in pairs:
        bits = 0
        for half, c in enumerate(pair):
            off = half * width
            for i, b in enumerate(base):
                if gcd(b, c.poly).degree > 0:
                    bits |= 1 << (off + i)
            if mode == "rational":
                v = int(c.content)
                if v < 0:
                    bits |= 1 << (off + len(base))
                for j, p in enumerate(primes):
                    if v % p == 0:
                        bits |= 1 << (off + len(base) + 1 + j)
        vecs.append(bits)
    return vecs


def _f2_rank(vecs) -> int:
    rows = [v for v in vecs if v]
    rank = 0
    while rows:
        pivot = max(rows)
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows if r != pivot]
        rows = [r for r in rows if r]
        rank += 1
    return rank


def descent_image_size(model: WeierstrassModel, points, mode: str = "geometric", e1_index=0, e2_index=2) -> int:
    pairs = [two_descent_image(model, P, e1_index, e2_index) for P in points]
    return 2 ** _f2_rank(_class_vectors(pairs, mode))


@dataclass
class SaturationReport:
    verdict: str
    image_size: int
    full_size: int
    admissible: list
    surviving: list
    images: dict = field(default_factory=dict)
    subset_sizes: dict = field(default_factory=dict)


def saturation_check(model: WeierstrassModel, free: dict, torsion: dict, torsion_structure: tuple, admissible,
                     mode: str = "geometric", e1_index=0, e2_index=2, subsets=()) -> SaturationReport:
    """Rule out even indices [G : H] with the 2-descent map.

    H is spanned by ``free`` and ``torsion``.  G/2G has order
    2^(rank + number of even cyclic torsion factors); when the image of H has
    that order, H + 2G = G, so the index is odd and every even admissible
    index is excluded.  ``subsets`` lists name groups whose image sizes are
    reported as well.
    """
    gens = dict(free)
    gens.update(torsion)
    images = {n: two_descent_image(model, P, e1_index, e2_index) for n, P in gens.items()}
    full = 2 ** (len(free) + sum(1 for m in torsion_structure if m % 2 == 0))
    size = descent_image_size(model, list(gens.values()), mode, e1_index, e2_index) if gens else 1
    extra = {}
    for names in subsets:
        extra[tuple(names)] = descent_image_size(model, [gens[n] for n in names], mode, e1_index, e2_index)
    surviving = [n for n in admissible if n > 1 and (n % 2 == 1 or size < full)]
    verdict = "saturated" if not surviving else "undecided: indices " + ",".join(map(str, surviving))
    return SaturationReport(verdict, size, full, list(admissible), surviving, images, extra)


def psi_nontrivial_cosets(model: WeierstrassModel, P, torsion_points, mode: str = "geometric",
                          e1_index=0, e2_index=2) -> dict:
    """For each torsion T, whether psi(P + T) differs from (1, 1)."""
    out = {}
    for name, T in torsion_points.items():
        S = model.add(_pt(P), _pt(T))
        a, b = two_descent_image(model, S, e1_index, e2_index)
        out[name] = not (a.is_trivial(mode) and b.is_trivial(mode))
    return out


# ---------------------------------------------------------------------------
# torsion


@dataclass
class TorsionReport:
    structure: tuple
    generators: list
    points: list
    certificates: dict
    exponent_bound: int


def _is_sq(f, mode):
    return is_square(f, mode)


def _sqrt(f: RationalFunction, base):
    return base.sqrt(f)


def halving_discriminant(model: WeierstrassModel, index: int) -> RationalFunction:
    """Discriminant 4 (e_j - e_i)(e_k - e_i) of the quadratic whose roots are x(R) with 2R = (e_i, 0)."""
    base = model.base
    e = [base.zero, model.roots[0], model.roots[1]]
    j, k = [m for m in range(3) if m != index]
    return (e[j] - e[index]) * (e[k] - e[index]) * 4


def halve(model: WeierstrassModel, P, mode: str = "geometric"):
    """(halvable, R) with 2R = P, R None when halvable only after extending constants.

    P is in 2E iff x(P) - e_i is a square for every root (2-torsion points
    use the products of root differences instead).
    """
    P = _pt(P)
    base = model.base
    e = [base.zero, model.roots[0], model.roots[1]]
    if P.is_infinity:
        return True, P
    alphas = []
    for i in range(3):
        if P.x == e[i]:
            j, k = [m for m in range(3) if m != i]
            alphas.append((e[i] - e[j]) * (e[i] - e[k]))
        else:
            alphas.append(P.x - e[i])
    if not all(is_square(a, mode) for a in alphas):
        return False, None
    if P.y == base.zero:
        return _halve_torsion(model, P)
    roots = [base.sqrt(a) for a in alphas]
    if any(r is None for r in roots):
        return True, None
    for signs in itertools.product((1, -1), repeat=2):
        r1, r2, r3 = roots[0], roots[1] * signs[0], roots[2] * signs[1]
        xr = P.x + r1 * r2 + r1 * r3 + r2 * r3
        R = model.lift_x(xr)
        if R is None:
            continue
        for cand in (R, model.neg(R)):
            if model.scalar_mul(2, cand) == P:
                return True, cand
    raise MordellWeilError("halving criterion satisfied but no half found")


def _halve_torsion(model: WeierstrassModel, T):
    """Halves of a 2-torsion point (e_i, 0): x(R) = e_i +- sqrt((e_j - e_i)(e_k - e_i))."""
    base = model.base
    e = [base.zero, model.roots[0], model.roots[1]]
    i = [m for m in range(3) if e[m] == T.x][0]
    disc = halving_discriminant(model, i) / 4
    s = base.sqrt(disc)
    if s is None:
        return True, None
    for sign in (1, -1):
        R = model.lift_x(e[i] + s * sign)
        if R is None:
            continue
        for cand in (R, model.neg(R)):
            if model.scalar_mul(2, cand) == T:
                return True, cand
    return True, None


def _group_closure(model, gens, limit: int = 64):
    pts = [model.O]
    frontier = [model.O]
    while frontier:
        nxt = []
        for P in frontier:
            for g in gens:
                S = model.add(P, g)
                if S not in pts:
                    pts.append(S)
                    nxt.append(S)
                    if len(pts) > limit:
                        raise MordellWeilError("torsion closure too large")
        frontier = nxt
    return pts


def _structure(model, pts) -> tuple:
    """Invariant factors of a finite abelian 2-group given as a point list."""
    counts = {}
    for k in range(0, 8):
        m = 2 ** k
        counts[k] = sum(1 for P in pts if model.scalar_mul(m, P).is_infinity)
        if counts[k] == len(pts):
            break
    # number of cyclic factors of order >= 2^k is log2(counts[k] / counts[k-1])
    factors = []
    kmax = max(counts)
    ge = {k: (counts[k] // counts[k - 1]).bit_length() - 1 for k in range(1, kmax + 1)}
    for k in range(1, kmax + 1):
        exact = ge[k] - ge.get(k + 1, 0)
        factors += [2 ** k] * exact
    return tuple(sorted(factors))


def torsion_subgroup(model: WeierstrassModel, mode: str = "geometric", fibers=None) -> TorsionReport:
    """2-primary torsion of a factored model, bounded by the component-group exponent of its fibers."""
    from math import lcm

    qm = rational_model(model)
    inv = surface_invariants(qm if qm is not None else model, fibers)
    bound = inv.torsion_bound
    exponent = 1
    for m in bound:
        exponent = lcm(exponent, m)
    odd = exponent
    while odd % 2 == 0:
        odd //= 2
    twos = model.two_torsion_points()
    certs = {}
    for i, T in enumerate(twos):
        disc = halving_discriminant(model, i)
        certs[f"({_fmt(T.x)}, 0)"] = {"discriminant": disc, "square": is_square(disc, mode)}
    gens = list(twos)
    layer = list(twos)
    level = 2
    while level < exponent // odd and layer:
        new = []
        for P in layer:
            ok, R = halve(model, P, mode)
            if not ok:
                continue
            if R is None:
                certs.setdefault("halves_need_constants", []).append(_fmt(P.x))
                continue
            new.append(R)
        gens += new
        layer = new
        level *= 2
    pts = _group_closure(model, gens)
    structure = _structure(model, pts)
    # minimal generating set: an element of maximal order plus a complement
    chosen = _generators_for(model, pts, structure)
    note = {} if odd == 1 else {"odd_part_not_searched": odd}
    certs.update(note)
    return TorsionReport(structure, chosen, pts, certs, exponent)


def _generators_for(model, pts, structure):
    if not structure:
        return []
    order = {}
    for P in pts:
        k = 1
        Q = P
        while not Q.is_infinity:
            Q = model.add(Q, P)
            k += 1
        order[P] = k
    # prefer the simplest coordinates so the choice is deterministic and readable
    pts = sorted(pts, key=lambda P: (0, "") if P.is_infinity else (len(str(P.x)) + len(str(P.y)), str(P.x)))
    if len(structure) == 1:
        return [next(P for P in pts if order[P] == structure[0])]
    big = structure[-1]
    g1 = next(P for P in pts if order[P] == big)
    sub = _group_closure(model, [g1])
    for P in pts:
        if order[P] == structure[0] and P not in sub:
            return [P, g1]
    raise MordellWeilError("could not split the torsion group")


def _fmt(c) -> str:
    return c.to_string() if hasattr(c, "to_string") else str(c)


# ---------------------------------------------------------------------------
# ranks


def shioda_tate_rank(rho: int, trivial_rank: int, bound: bool = False) -> int:
    """rank = rho - trivial_rank (an upper bound when rho is a bound)."""
    r = rho - trivial_rank
    if r < 0:
        raise MordellWeilError("inconsistent inputs")
    return r


@dataclass(frozen=True)
class RankStatement:
    model: str
    rank: int
    kind: str  # "exact" or "upper"
    provenance: tuple = ()


def twist_rank_additivity(certificate: TwistCertificate, base_rank: RankStatement,
                          twist_rank: RankStatement, name: str = "") -> RankStatement:
    """rank E(k(s)) = rank E(k(t)) + rank E^(d)(k(t)) for a certified double cover t = phi(s)."""
    if not isinstance(certificate, TwistCertificate) or certificate.kind != "double_cover":
        raise MordellWeilError("uncertified twist pair")
    kind = "exact" if base_rank.kind == twist_rank.kind == "exact" else "upper"
    prov = (f"{base_rank.model}: {base_rank.rank}", f"{twist_rank.model}: {twist_rank.rank}")
    return RankStatement(name, base_rank.rank + twist_rank.rank, kind, prov)


# ---------------------------------------------------------------------------
# Galois descent


def conjugate_point(model: WeierstrassModel, P, sigma: FieldAutomorphism):
    P = _pt(P)
    if P.is_infinity:
        return P
    return model.point(galois_conjugate(P.x, sigma), galois_conjugate(P.y, sigma))


def combine(model: WeierstrassModel, coeffs, points):
    S = model.O
    for c, P in zip(coeffs, points):
        if c:
            S = model.add(S, model.scalar_mul(int(c), _pt(P)))
    return S


@dataclass
class GaloisRankReport:
    matrices: dict
    rank_over_base: int
    rational_combinations: list
    rational_generators: list


def galois_rank_over_Q(model: WeierstrassModel, generators, sigmas=None, heights: HeightPairing | None = None,
                       torsion_points=()) -> GaloisRankReport:
    """Action of Gal(K/Q) on the lattice spanned by ``generators`` and its fixed rank.

    sigma(P_i) is written as sum_j c_ij P_j through the Gram matrix and the
    expression is verified exactly up to a listed torsion point.
    """
    K = model.base.constants
    pts = [_pt(P) for P in generators]
    n = len(pts)
    hp = heights or HeightPairing(model)
    if sigmas is None:
        if K == QQ:
            sigmas = []
        else:
            sigmas = [power_automorphism(K, k) for k in range(2, 2 * K.degree) if sympy.gcd(k, 2 * K.degree) == 1]
            sigmas = [s for s in sigmas if not s.is_identity()]
    G = sympy.Matrix(hp.gram(pts).matrix)
    Ginv = G.inv()
    tors = [model.O] + [_pt(T) for T in torsion_points]
    mats = {}
    for sigma in sigmas:
        cols = []
        for P in pts:
            sP = conjugate_point(model, P, sigma)
            v = sympy.Matrix([hp.pair(sP, Q) for Q in pts])
            c = Ginv * v
            if any(not x.is_integer for x in c):
                raise MordellWeilError("sigma(P) not expressible in the generators")
            c = [int(x) for x in c]
            diff = model.add(sP, model.neg(combine(model, c, pts)))
            if tors and len(tors) > 1 and diff not in tors:
                raise MordellWeilError("sigma(P) differs from the combination by a non-listed point")
            if hp.height(diff) != 0:
                raise MordellWeilError("sigma(P) not expressible in the generators")
            cols.append(c)
        mats[repr(sigma)] = sympy.Matrix(cols).T
    if mats:
        stacked = sympy.Matrix.vstack(*[M - sympy.eye(n) for M in mats.values()])
        null = stacked.nullspace()
    else:
        null = [sympy.eye(n)[:, i] for i in range(n)]
    combos = []
    for v in null:
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in v]) if len(v) else 1
        w = [int(x * den) for x in v]
        g = 0
        for a in w:
            g = sympy.igcd(g, a)
        combos.append([a // g for a in w] if g else w)
    rational = []
    for w in combos:
        nz = [i for i, a in enumerate(w) if a]
        if len(nz) == 1 and abs(w[nz[0]]) == 1:
            rational.append(nz[0])
    return GaloisRankReport({k: [list(map(int, M.row(i))) for i in range(n)] for k, M in mats.items()},
                            len(null), combos, rational)


# ---------------------------------------------------------------------------
# report


@dataclass
class MWReport:
    model: str
    geometric_rank: int | None
    rank_over_base: int | None
    torsion: tuple
    torsion_generators: list
    generators: list
    gram: HeightGram | None
    index_certificate: dict
    picard_source: str = ""
