"""Characteristic polynomials of Frobenius on H^2 of an elliptic surface.

Point counts give traces Tr(Phi^m | H^2) = #S(F_{q^m}) - 1 - q^(2m).  The
known part (fiber components, zero section, general fiber, declared
sections) acts by q times a permutation; the rest is recovered from its
power sums by Newton's identities, optionally completed by the functional
equation lambda -> q^2 / lambda when fewer traces are available.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd

import sympy

from .exact_algebra.fields import squarefree_integer_part

_X = sympy.Symbol("x")


class SpectrumError(ValueError):
    pass


@dataclass(frozen=True)
class CharPoly:
    """det(x I - Phi) on a subspace; ``coeffs`` are integers, leading 1 first."""

    coeffs: tuple
    q: int

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise SpectrumError("characteristic polynomial must be monic")

    @property
    def dim(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, q: int) -> "CharPoly":
        return cls((1,), q)

    @classmethod
    def from_sympy(cls, expr, q: int) -> "CharPoly":
        P = sympy.Poly(sympy.expand(expr), _X)
        return cls(tuple(int(c) for c in P.all_coeffs()), q)

    def __mul__(self, other: "CharPoly") -> "CharPoly":
        if self.q != other.q:
            raise SpectrumError("mixed q")
        out = [0] * (self.dim + other.dim + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return CharPoly(tuple(out), self.q)

    def __eq__(self, other):
        return isinstance(other, CharPoly) and (self.coeffs, self.q) == (other.coeffs, other.q)

    def __hash__(self):
        return hash((self.coeffs, self.q))

    def as_sympy(self, var=_X):
        return sum(c * var ** (self.dim - i) for i, c in enumerate(self.coeffs))

    def sympy_poly(self) -> sympy.Poly:
        return sympy.Poly(list(self.coeffs), _X)

    def exact_divide(self, other: "CharPoly") -> "CharPoly":
        quo, rem = sympy.div(self.sympy_poly(), other.sympy_poly())
        if not rem.is_zero:
            raise SpectrumError("factor does not divide")
        return CharPoly(tuple(int(c) for c in sympy.Poly(quo, _X).all_coeffs()), self.q)

    def power_sums(self, n: int) -> list[int]:
        """s_1..s_n, s_k the k-th power sum of the roots."""
        c = list(self.coeffs) + [0] * max(0, n - self.dim)
        s = []
        for k in range(1, n + 1):
            v = -k * c[k] - sum(c[i] * s[k - i - 1] for i in range(1, k))
            s.append(v)
        return s

    def base_change(self, r: int) -> "CharPoly":
        """Characteristic polynomial of Phi^r (roots raised to the r-th power), over q^r."""
        sums = self.power_sums(self.dim * r)
        return traces_to_charpoly([sums[r * k - 1] for k in range(1, self.dim + 1)], self.dim, self.q ** r)

    def satisfies_weil_coefficients(self) -> bool:
        """Necessary coefficient bounds |c_k| <= C(n, k) q^k for roots of absolute value q."""
        n = self.dim
        return all(abs(c) <= comb(n, k) * self.q ** k for k, c in enumerate(self.coeffs))

    def multiplicity(self, root: int) -> int:
        P = self.sympy_poly()
        k = 0
        lin = sympy.Poly(_X - root, _X)
        while P.degree() > 0:
            quo, rem = sympy.div(P, lin)
            if not rem.is_zero:
                break
            P = quo
            k += 1
        return k

    def factored(self) -> str:
        """Human-readable factorization over Q, e.g. (x - 17)^18*(x^4 - 8*x^3 + ...)."""
        return str(sympy.factor(self.as_sympy()))

    def to_string(self) -> str:
        return str(sympy.expand(self.as_sympy()))

    def __repr__(self):
        return f"CharPoly({self.factored()}, q={self.q})"


# ---------------------------------------------------------------------------
# Newton identities


def traces_to_charpoly(traces, dim: int | None = None, q: int = 0) -> CharPoly:
    """Characteristic polynomial of dimension ``dim`` from traces t_1..t_dim of its powers."""
    traces = [Fraction(t) for t in traces]
    if dim is None:
        dim = len(traces)
    if len(traces) != dim:
        raise SpectrumError(f"need exactly {dim} traces, got {len(traces)}")
    c = [Fraction(1)]
    for k in range(1, dim + 1):
        v = -sum(traces[i - 1] * c[k - i] for i in range(1, k + 1)) / k
        c.append(v)
    if any(x.denominator != 1 for x in c):
        raise SpectrumError("trace data inconsistent")
    return CharPoly(tuple(int(x) for x in c), q)


def eigenvalue_traces(cp: CharPoly, n: int) -> list[int]:
    return cp.power_sums(n)


# ---------------------------------------------------------------------------
# the trivial lattice


def _cycles(perm) -> list[int]:
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen:
            continue
        L = 0
        j = i
        while j not in seen:
            seen.add(j)
            j = perm[j]
            L += 1
        out.append(L)
    return out


def _cycle_factor(L: int, r: int, p: int) -> list[tuple[int, int]]:
    """A Phi_p cycle of length L seen by Phi_p^r: gcd(L, r) cycles of length L / gcd."""
    g = gcd(L, r)
    return [(L // g, p ** r)] * g


def _cycle_poly(length: int, q: int) -> CharPoly:
    co = [0] * (length + 1)
    co[0] = 1
    co[-1] = -(q ** length)
    return CharPoly(tuple(co), q)


def trivial_lattice_charpoly(fibers, p: int, r: int = 1, sections=()) -> CharPoly:
    """Frobenius (over F_q, q = p^r) on fiber components, zero section, fiber class and declared sections.

    ``fibers`` are KodairaFiber objects with ``frobenius_action`` on their
    components at the residue level (component 0 is the identity component).
    ``sections`` is a list of cycle lengths under Phi_p of declared section
    classes (1 for a section defined over F_p).
    """
    q = p ** r
    cp = _cycle_poly(1, q) * _cycle_poly(1, q)
    for f in fibers:
        if f.is_good:
            continue
        perm = f.frobenius_action
        if perm is None:
            raise SpectrumError(f"no Frobenius action for fiber {f.type}")
        nonid = [c for c in range(len(perm)) if c != 0]
        if any(perm[c] == 0 for c in nonid):
            raise SpectrumError("Frobenius moves the identity component")
        sub = {c: i for i, c in enumerate(nonid)}
        cyc = _cycles([sub[perm[c]] for c in nonid])
        d = f.residue_degree
        for L in cyc:
            for length, qq in _cycle_factor(d * L, r, p):
                cp = cp * _cycle_poly(length, qq)
    for L in sections:
        for length, qq in _cycle_factor(L, r, p):
            cp = cp * _cycle_poly(length, qq)
    return cp


def quotient_traces(counts, known: CharPoly) -> list[int]:
    """Traces on H^2 / V from surface counts #S(F_{q^m}), m = 1.., and the known factor on V."""
    q = known.q
    sv = known.power_sums(len(counts))
    return [c - 1 - q ** (2 * m) - sv[m - 1] for m, c in enumerate(counts, start=1)]


# ---------------------------------------------------------------------------
# functional equation


@dataclass(frozen=True)
class DualityBranch:
    sign: int
    charpoly: CharPoly
    weil_ok: bool
    matches_extra_traces: bool

    @property
    def accepted(self) -> bool:
        return self.weil_ok and self.matches_extra_traces


@dataclass(frozen=True)
class DualityResult:
    unknown_degree: int
    branches: tuple
    full: CharPoly | None = None

    @property
    def accepted(self) -> list[DualityBranch]:
        return [b for b in self.branches if b.accepted]

    @property
    def ambiguous(self) -> bool:
        return len(self.accepted) > 1

    @property
    def unknown(self) -> CharPoly:
        acc = self.accepted
        if len(acc) != 1:
            raise SpectrumError("ambiguous completion: supply one more trace" if acc else "no consistent completion")
        return acc[0].charpoly


def roots_on_weil_circle(cp: CharPoly) -> bool:
    """Exact test that every root has absolute value q, via real roots of the trace polynomial."""
    q = cp.q
    P = cp.sympy_poly()
    for root in (q, -q):
        lin = sympy.Poly(_X - root, _X)
        while P.degree() > 0:
            quo, rem = sympy.div(P, lin)
            if not rem.is_zero:
                break
            P = quo
    n = P.degree()
    if n == 0:
        return True
    if n % 2:
        return False
    c = [int(v) for v in P.all_coeffs()]  # high first
    k = n // 2
    # constant term must be q^n for roots paired as lambda, q^2 / lambda
    if c[-1] != q ** n:
        return False
    # write x^-k P(x) = sum_e b_e (x^e + q^(2e) x^-e) ... as Q(w), w = x + q^2/x
    lau = {k - i: Fraction(v) for i, v in enumerate(c)}  # exponent -> coeff
    Q = {}
    for e in range(k, -1, -1):
        a = lau.get(e, Fraction(0))
        Q[e] = a
        if a:
            for j in range(e + 1):
                ex = e - 2 * j
                lau[ex] = lau.get(ex, Fraction(0)) - a * comb(e, j) * q ** (2 * j)
    if any(v for v in lau.values()):
        return False
    w = sympy.Symbol("w")
    Qp = sympy.Poly(sum(sympy.Rational(v.numerator, v.denominator) * w ** e for e, v in Q.items()), w)
    roots = sympy.real_roots(Qp)
    if len(roots) != k:
        return False
    return all(-2 * q <= r <= 2 * q for r in roots)


def duality_complete(traces, known: CharPoly, b2: int, extra_check: bool = True) -> DualityResult:
    """Complete the unknown factor of degree u = b2 - deg(known) from its first traces.

    The functional equation gives c_{u-j} = eps q^(u-2j) c_j with eps = +-1, so
    the traces t_1..t_floor(u/2) determine the factor up to eps (for even u
    and eps = -1 the middle coefficient must vanish).  Traces beyond those
    are used as a consistency check.  Every branch is reported.
    """
    q = known.q
    u = b2 - known.dim
    if u < 0:
        raise SpectrumError("known factor exceeds b2")
    need = u // 2
    if len(traces) < need:
        raise SpectrumError(f"need at least {need} traces of the quotient, got {len(traces)}")
    if u == 0:
        return DualityResult(0, (DualityBranch(1, CharPoly.one(q), True, True),), known)
    head = [Fraction(t) for t in traces[:need]]
    c = [Fraction(1)]
    for k in range(1, need + 1):
        c.append(-sum(head[i - 1] * c[k - i] for i in range(1, k + 1)) / k)
    if any(x.denominator != 1 for x in c):
        raise SpectrumError("trace data inconsistent")
    branches = []
    for eps in (1, -1):
        full = [None] * (u + 1)
        for j in range(need + 1):
            full[j] = int(c[j])
        ok = True
        for j in range(need + 1):
            mirror = u - j
            val = eps * q ** (u - 2 * j) * full[j] if u - 2 * j >= 0 else None
            if mirror == j:
                if val != full[j]:
                    ok = False
            elif mirror > need:
                full[mirror] = val
        if not ok or any(v is None for v in full):
            continue
        cp = CharPoly(tuple(full), q)
        weil = cp.satisfies_weil_coefficients() and roots_on_weil_circle(cp)
        extra = True
        if extra_check and len(traces) > need:
            sums = cp.power_sums(len(traces))
            extra = all(s == t for s, t in zip(sums, traces))
        branches.append(DualityBranch(eps, cp, weil, extra))
    if not branches:
        raise SpectrumError("no consistent completion")
    res = DualityResult(u, tuple(branches))
    acc = res.accepted
    if not acc:
        raise SpectrumError("no consistent completion")
    if len(acc) == 1:
        return DualityResult(u, tuple(branches), known * acc[0].charpoly)
    return res


# ---------------------------------------------------------------------------
# cyclotomic eigenvalues and Picard bounds


def _totient_inverse_bound(n: int):
    """All m with phi(m) <= n."""
    out = []
    m = 1
    limit = 2 * n * n + 2  # phi(m) >= sqrt(m / 2)
    while m <= limit:
        if sympy.totient(m) <= n:
            out.append(m)
        m += 1
    return out


def cyclotomic_count(cp: CharPoly) -> int:
    """Number of roots of the form q * (root of unity), with multiplicity."""
    q = cp.q
    n = cp.dim
    if n == 0:
        return 0
    # r(x) = p(q x) / q^n, over Q
    r = sympy.Poly([sympy.Rational(c * q ** (n - i), q ** n) * 1 for i, c in enumerate(cp.coeffs)], _X)
    # coefficient of x^(n-i) in p(qx) is c_i q^(n-i)
    total = 0
    for m in _totient_inverse_bound(n):
        phi = sympy.Poly(sympy.cyclotomic_poly(m, _X), _X)
        while r.degree() >= phi.degree():
            quo, rem = sympy.div(r, phi)
            if not rem.is_zero:
                break
            r = quo
            total += phi.degree()
    return total


@dataclass(frozen=True)
class PicardBoundReport:
    cyclotomic: int
    rank_bound: int
    trivial_rank: int
    conclusion: str


def picard_bound(cp: CharPoly, trivial_rank: int, section_rank: int = 0) -> PicardBoundReport:
    """Upper bound on the geometric Picard number of the reduction, compared to the known lattice."""
    k = cyclotomic_count(cp)
    known = trivial_rank + section_rank
    if k == known:
        text = f"rho = {k}: the known lattice of rank {known} has full rank"
    elif k > known:
        text = f"rho <= {k}; known lattice has rank {known}"
    else:
        text = f"inconsistent: bound {k} below known rank {known}"
    return PicardBoundReport(k, k, trivial_rank, text)


# ---------------------------------------------------------------------------
# Artin-Tate classes


def artin_tate_class(cp: CharPoly, rho_prime: int | None = None) -> int:
    """Square class of -R(1/q) where det(1 - T Phi) = (1 - qT)^rho' R(T), R(1/q) != 0.

    Requires q to be a square and every eigenvalue of the form q * zeta to
    be exactly q.
    """
    q = cp.q
    if sympy.integer_nthroot(q, 2)[1] is False:
        raise SpectrumError("q must be a square")
    mult = cp.multiplicity(q)
    if cyclotomic_count(cp) != mult:
        raise SpectrumError("eigenvalue q*zeta with zeta != 1 present")
    if rho_prime is not None and rho_prime != mult:
        raise SpectrumError(f"declared rho' = {rho_prime} but (x - q) has multiplicity {mult}")
    rest = cp
    lin = CharPoly((1, -q), q)
    for _ in range(mult):
        rest = rest.exact_divide(lin)
    # det(1 - T Phi) restricted to the rest is T^n rest(1/T); at T = 1/q this is rest(q) / q^n
    n = rest.dim
    val = Fraction(sum(c * q ** (n - i) for i, c in enumerate(rest.coeffs)), q ** n)
    if val == 0:
        raise SpectrumError("R(1/q) = 0")
    num, den = (-val).numerator, (-val).denominator
    return squarefree_integer_part(num * den)


@dataclass(frozen=True)
class GateVerdict:
    verdict: str
    rank_bound: int | None
    witnesses: tuple = field(default_factory=tuple)


def discriminant_gate(classes, bound: int) -> GateVerdict:
    """Two Artin-Tate classes that differ mod squares lower the common Picard bound by one."""
    classes = list(classes)
    if len(classes) < 2:
        raise SpectrumError("need two primes")
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            if classes[i] != classes[j]:
                return GateVerdict(f"rank <= {bound - 1}", bound - 1, (classes[i], classes[j]))
    return GateVerdict("inconclusive", None, ())


def picard_charpoly_from_counts(counts, known: CharPoly, b2: int) -> DualityResult:
    """Full H^2 polynomial: quotient traces from counts, then duality completion."""
    return duality_complete(quotient_traces(counts, known), known, b2)
