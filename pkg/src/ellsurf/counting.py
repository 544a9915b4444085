"""Point counts of elliptic surfaces over finite fields.

#S(F_{p^m}) is the sum over t in P^1(F_{p^m}) of the point counts of the
fibers of the smooth minimal model.  The engine works at every level d | m:

* good fibers over the affine line are grouped in Frobenius orbits; a trace
  a_t is computed once at the minimal level d and extended to F_{p^m} by
  s_k = a s_{k-1} - p^d s_{k-2};
* for factored models y^2 = x(x - A)(x - B) all traces of one level come out
  of a single table: a_t = -chi(A) S(B/A) with S(lam) = sum_z chi(z(z-1)(z-lam)),
  and S is an additive convolution over F_{p^d} = (Z/p)^d evaluated exactly
  by a number-theoretic transform modulo a prime l = 1 mod p;
* places where A, B, A - B or a denominator vanish, and infinity, are
  treated one by one on their residue fields; singular fibers are counted
  from their dual graph and Frobenius permutation.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import sympy

from .exact_algebra.poly import Poly, RationalFunction
from .finite_fields import ExtField, PrimeField, factor_fp, orbit_arrays
from .kodaira import KodairaFiber, _residue, tate_fiber_analysis
from .weierstrass import Place, WeierstrassModel

STRATEGIES = ("char-sum", "bsgs", "auto")
DIRECT_SUM_LIMIT = 1 << 16


class CountingError(RuntimeError):
    pass


@dataclass(frozen=True)
class TraceVector:
    q: int
    counts: tuple
    p: int = 0
    r: int = 1

    @property
    def M(self) -> int:
        return len(self.counts)

    def traces_h2(self) -> list[int]:
        """Traces of Frobenius on H^2: #S(F_{q^m}) - 1 - q^(2m)."""
        return [c - 1 - self.q ** (2 * m) for m, c in enumerate(self.counts, start=1)]


@dataclass(frozen=True)
class FiberCount:
    representative: object
    degree: int
    trace: int | None = None
    fiber: KodairaFiber | None = None


# ---------------------------------------------------------------------------
# single fibers


def extend_trace(a: int, qd: int, k: int) -> int:
    """s_k for eigenvalues with sum a and product qd (s_0 = 2, s_1 = a)."""
    s0, s1 = 2, a
    if k == 0:
        return 2
    for _ in range(k - 1):
        s0, s1 = s1, a * s1 - qd * s0
    return s1


def _direct_trace(F: ExtField, coeffs) -> int:
    """-sum_x chi(x^3 + a2 x^2 + a4 x + a6) over F, vectorized; coeffs are codes (a2, a4, a6)."""
    T = F.tables
    x = np.arange(F.q, dtype=np.int64)
    a2, a4, a6 = coeffs
    acc = T.add(x, np.full_like(x, a2))
    acc = T.add(T.mul(acc, x), np.full_like(x, a4))
    acc = T.add(T.mul(acc, x), np.full_like(x, a6))
    return -int(T.chi[acc].astype(np.int64).sum())


def _short_coeffs(model: WeierstrassModel):
    a1, a2, a3, a4, a6 = model.a
    if a1 or a3:
        b2, b4, b6, _ = model.b_invariants()
        return b2 / 4, b4 / 2, b6 / 4
    return a2, a4, a6


def fiber_trace(model: WeierstrassModel, strategy: str = "char-sum") -> int:
    """Frobenius trace a = q + 1 - #E(F_q) of a nonsingular curve over a finite field."""
    F = model.base
    if not model.discriminant():
        raise CountingError("use singular_fiber_count")
    if isinstance(F, PrimeField):
        F = ExtField(F.p, 1)
        model = model.map_coefficients(lambda c: F(int(c)), base=F)
    if strategy == "bsgs" and F.q > 229:
        return F.q + 1 - bsgs_order(model)
    a2, a4, a6 = (F(c).v for c in _short_coeffs(model))
    return _direct_trace(F, (a2, a4, a6))


def good_fiber_count(model: WeierstrassModel, m: int, strategy: str = "char-sum") -> int:
    """#E(F_{p^m}) for a nonsingular fiber defined over F_{p^d}, d | m."""
    F = model.base
    d = getattr(F, "m", 1)
    p = F.characteristic
    if m % d:
        raise CountingError("extension degree must be a multiple of the field degree")
    a = fiber_trace(model, strategy)
    return p ** m + 1 - extend_trace(a, p ** d, m // d)


def bsgs_order(model: WeierstrassModel, seed: int = 1) -> int:
    """Group order of E(F_q) by baby-step giant-step in the Hasse interval."""
    import math
    import random

    F = model.base
    q = F.q
    lo = q + 1 - 2 * math.isqrt(q) - 2
    hi = q + 1 + 2 * math.isqrt(q) + 2
    rng = random.Random(seed)
    a2, a4, a6 = _short_coeffs(model)
    E = WeierstrassModel(F, 0, a2, 0, a4, a6)
    lcm_order = 1
    for _ in range(40):
        while True:
            x = F.element(rng.randrange(q))
            P = E.lift_x(x)
            if P is not None:
                break
        cands = _bsgs_multiples(E, P, lo, hi)
        order = _point_order(E, P, cands[0])
        lcm_order = lcm_order * order // math.gcd(lcm_order, order)
        inside = [n for n in range(lo - lo % lcm_order + lcm_order if lo % lcm_order else lo, hi + 1, lcm_order)]
        inside = [n for n in inside if lo <= n <= hi and q + 1 - 2 * math.isqrt(q) - 1 <= n]
        inside = [n for n in inside if (n - q - 1) ** 2 <= 4 * q]
        if len(inside) == 1:
            return inside[0]
    raise CountingError("baby-step giant-step did not isolate the group order")


def _bsgs_multiples(E, P, lo, hi):
    import math

    width = hi - lo
    m = math.isqrt(width) + 1
    baby = {}
    R = E.O
    for j in range(m):
        key = _pt_key(R)
        baby.setdefault(key, j)
        R = R + P
    mP = E.scalar_mul(m, P)
    G = E.scalar_mul(lo, P)
    found = []
    neg_mP = -mP
    for i in range(m + 1):
        # want lo + i m - j with (lo + i m) P = j P  =>  (lo + i m - j) P = O
        key = _pt_key(G)
        if key in baby:
            n = lo + i * m - baby[key]
            if n > 0:
                found.append(n)
        G = G + mP
    del neg_mP
    if not found:
        raise CountingError("no multiple of the point order found")
    return found


def _pt_key(R):
    return None if R.is_infinity else (R.x.v, R.y.v)


def _point_order(E, P, n):
    """Exact order of P given nP = O."""
    for r in sympy.primefactors(n):
        while n % r == 0 and E.scalar_mul(n // r, P).is_infinity:
            n //= r
    return n


# ---------------------------------------------------------------------------
# singular fibers


def _dual_graph(fiber: KodairaFiber):
    """(components, edges) of the reduced special fiber; edges are (label, comp_a, comp_b)."""
    kind, n = fiber.kind, fiber.n
    if kind == "I":
        if n == 2:
            return 2, [(0, 0, 1), (1, 1, 0)]
        return n, [(i, i, (i + 1) % n) for i in range(n)]
    if kind == "I*":
        comps = n + 5
        # leaves 0..3, chain 4..4+n
        chain = list(range(4, 5 + n))
        edges = [(0, 0, chain[0]), (1, 1, chain[0])]
        for i in range(n):
            edges.append((2 + i, chain[i], chain[i + 1]))
        edges += [(n + 2, 2, chain[-1]), (n + 3, 3, chain[-1])]
        return comps, edges
    if kind == "II*":
        return 9, [(i, i, i + 1) for i in range(7)] + [(7, 5, 8)]
    if kind == "III*":
        return 8, [(i, i, i + 1) for i in range(6)] + [(6, 3, 7)]
    raise CountingError(f"no dual graph for {fiber.type}")


def _edge_image(fiber: KodairaFiber, label):
    n = fiber.n
    if fiber.kind == "I" and n >= 2:
        if fiber.split is not False:
            return label
        # reflection c -> -c maps the edge (i, i+1) to (-i-1, -i)
        return (-label - 1) % n
    return label


def singular_fiber_count(fiber: KodairaFiber, p: int, m: int) -> int:
    """Points over F_{p^m} of the reduced fiber of the smooth model (d | m, d the residue degree)."""
    d = fiber.residue_degree
    if m % d:
        raise CountingError("residue degree must divide the extension degree")
    Q = p ** m
    k = m // d
    perm = fiber.frobenius_action
    kind, n = fiber.kind, fiber.n
    if kind == "I" and n == 0:
        raise CountingError("good fiber: use good_fiber_count")
    if perm is None:
        if kind in ("II", "III", "IV", "IV*") or kind == "I*":
            raise CountingError(f"unsupported fiber type for counting: {fiber.type} without Frobenius data")
        raise CountingError(f"missing Frobenius action for {fiber.type}")
    # Frobenius of F_{p^m} acts as the k-th power of the residue-level permutation
    size = len(perm)
    act = list(range(size))
    for _ in range(k):
        act = [perm[c] for c in act]
    # I_2 is non-split with trivial action on components, so splitness is read off the fiber
    split_now = act == list(range(size)) and not (fiber.split is False and k % 2)
    if kind == "I" and n == 1:
        return Q if split_now else Q + 2
    if kind == "II":
        return Q + 1
    if kind == "III":
        return 2 * Q + 1
    if kind == "IV":
        return 3 * Q + 1 if split_now else Q + 1
    comps, edges = _dual_graph(fiber)
    fixed = {c for c in range(comps) if act[c] == c}
    total = (Q + 1) * len(fixed)
    for label, a, b in edges:
        img = label
        for _ in range(k):
            img = _edge_image(fiber, img)
        if img != label:
            continue
        if a in fixed and b in fixed:
            total -= 1
        elif act[a] == b and act[b] == a:
            total += 1
    return total


# ---------------------------------------------------------------------------
# the lambda table


def _ntt_prime(p: int, q: int) -> int:
    ell = (2 * q + 2) // p * p + 1
    while True:
        if ell > 2 * q + 1 and sympy.isprime(ell):
            return ell
        ell += p


def _root_of_unity(p: int, ell: int) -> int:
    for g in range(2, ell):
        w = pow(g, (ell - 1) // p, ell)
        if w != 1:
            return w
    raise CountingError("no root of unity")


def _dft_axes(arr: np.ndarray, W: np.ndarray, ell: int) -> np.ndarray:
    d = arr.ndim
    for ax in range(d):
        moved = np.moveaxis(arr, ax, -1)
        shp = moved.shape
        flat = moved.reshape(-1, shp[-1])
        flat = (flat @ W) % ell
        arr = np.moveaxis(flat.reshape(shp), -1, ax)
    return arr


def lambda_table(F: ExtField) -> np.ndarray:
    """S[lam] = sum_z chi(z (z - 1)(z - lam)) for every lam in F (indexed by code), exact."""
    T = F.tables
    p, d, q = F.p, F.m, F.q
    ell = _ntt_prime(p, q)
    if p * ell * ell >= 2 ** 63:
        raise CountingError("field too large for the int64 transform")
    w = _root_of_unity(p, ell)
    idx = np.arange(p)
    W = np.array([[pow(w, int(j * k), ell) for k in idx] for j in idx], dtype=np.int64)
    Winv = np.array([[pow(w, (-int(j * k)) % p, ell) for k in idx] for j in idx], dtype=np.int64)
    codes = np.arange(q, dtype=np.int64)
    chi = T.chi.astype(np.int64)
    h = chi * chi[T.add_prime(codes, p - 1)]  # chi(z) chi(z - 1)
    shape = (p,) * d
    H = _dft_axes((h % ell).reshape(shape), W, ell)
    X = _dft_axes((chi % ell).reshape(shape), W, ell)
    conv = _dft_axes((H * X) % ell, Winv, ell)
    inv_q = pow(q, -1, ell)
    conv = (conv.reshape(q) * inv_q) % ell
    conv = np.where(conv > ell // 2, conv - ell, conv)
    chi_m1 = int(T.chi[p - 1])
    return chi_m1 * conv


# ---------------------------------------------------------------------------
# surface counts


def _rf_coeff_lists(f: RationalFunction):
    return [int(c) for c in f.num.c], [int(c) for c in f.den.c]


class SurfaceCounter:
    """Counts #S(F_{p^m}) for a model over F_p(t).

    ``model`` must be a WeierstrassModel over FunctionField(PrimeField(p)).
    """

    def __init__(self, model: WeierstrassModel, strategy: str = "auto", threads: int = 1, cache=None,
                 model_hash: str | None = None):
        if strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        self.model = model
        K = model.base.constants
        if not isinstance(K, PrimeField):
            raise CountingError("counting needs a model over F_p(t)")
        self.p = K.p
        self.strategy = strategy
        self.threads = max(1, int(threads))
        self.cache = cache
        self.model_hash = model_hash or model_fingerprint(model)
        self.special = self._special_places()
        self.fibers = {pl: tate_fiber_analysis(model, pl) for pl in self.special}
        self._levels: dict[int, dict] = {}
        self._special_traces: dict = {}
        self.stats = {"orbits": 0, "cache_hits": 0}

    # -- places needing individual treatment -------------------------------

    def _special_places(self):
        m = self.model
        polys = []
        if m.roots is not None:
            r, s = m.roots
            for f in (r, s, r - s):
                polys += [f.num, f.den]
        else:
            D = m.discriminant()
            polys += [D.num, D.den]
            for c in m.a:
                polys.append(c.den)
        irr = {}
        for f in polys:
            if f.degree > 0:
                for g, _ in factor_fp(f):
                    irr[tuple(int(c) for c in g.c)] = g
        return [Place(g) for _, g in sorted(irr.items())] + [Place.infinity()]

    def singular_fibers(self):
        return [f for f in self.fibers.values() if not f.is_good]

    def _special_trace(self, place: Place) -> int:
        """Trace of a good fiber at a special place, computed on its residue field."""
        if place in self._special_traces:
            return self._special_traces[place]
        fib = self.fibers[place]
        m = self.model
        p = self.p
        if place.is_infinity:
            F = ExtField(p, 1)
        else:
            F = ExtField(p, place.degree, modulus=place.poly)
        k = fib.shift

        def res(f):
            if not f:
                return F.zero
            v = _val_rf(f, place)
            if v > 2 * k:
                return F.zero
            r = _residue(f, place, 2 * k) if v == 2 * k else None
            if r is None:
                raise CountingError("unexpected pole after minimalization")
            if place.is_infinity:
                return F(int(r))
            return F([int(c) for c in r.c])

        if m.roots is not None:
            r1, r2 = (res(c) for c in m.roots)
            coeffs = (F(0) - r1 - r2, r1 * r2, F(0))
        else:
            raise CountingError("special good places of general models are not supported")
        a = _direct_trace(F, tuple(c.v for c in coeffs))
        self._special_traces[place] = a
        return a

    # -- generic orbits at one level ----------------------------------------

    def _level(self, d: int):
        """Orbit representatives of exact degree d (excluding special places) with their traces."""
        if d in self._levels:
            return self._levels[d]
        F = ExtField(self.p, d)
        reps, _ = orbit_arrays(F, exact_degree=d)
        reps = self._drop_special(F, reps)
        traces = None
        keys = None
        if self.cache is not None:
            keys = [self.cache.key(self.model_hash, self.p, d, F.presentation, int(r)) for r in reps]
            got = self.cache.get_many(keys)
            if all(g is not None for g in got):
                traces = np.array(got, dtype=np.int64)
                self.stats["cache_hits"] += len(got)
        if traces is None:
            traces = self._traces(F, reps)
            if self.cache is not None:
                self.cache.put_many(list(zip(keys, (int(a) for a in traces))))
        bound = 2 * np.sqrt(float(F.q)) + 1e-9
        if traces.size and np.abs(traces).max() > bound:
            raise CountingError("Hasse bound violated")
        self.stats["orbits"] += len(reps)
        self._levels[d] = {"field": F, "reps": reps, "traces": traces}
        return self._levels[d]

    def _drop_special(self, F: ExtField, reps: np.ndarray) -> np.ndarray:
        T = F.tables
        keep = np.ones(len(reps), dtype=bool)
        for pl in self.special:
            if pl.is_infinity or F.m % pl.degree:
                continue
            vals = T.eval_fp_poly([int(c) for c in pl.poly.c], reps)
            keep &= vals != 0
        return reps[keep]

    def _traces(self, F: ExtField, reps: np.ndarray) -> np.ndarray:
        strategy = self.strategy
        if strategy == "auto":
            if self.model.roots is not None:
                strategy = "char-sum"
            else:
                strategy = "char-sum" if F.q <= DIRECT_SUM_LIMIT else "bsgs"
        if strategy == "char-sum" and self.model.roots is not None:
            return self._legendre_traces(F, reps)
        return self._per_fiber_traces(F, reps, strategy)

    def _eval_rf(self, F: ExtField, f: RationalFunction, t: np.ndarray) -> np.ndarray:
        T = F.tables
        num, den = _rf_coeff_lists(f)
        vn = T.eval_fp_poly(num, t)
        if len(den) == 1 and den[0] == 1:
            return vn
        vd = T.eval_fp_poly(den, t)
        return T.mul(vn, T.inv(vd))

    def _legendre_traces(self, F: ExtField, reps: np.ndarray) -> np.ndarray:
        T = F.tables
        S = lambda_table(F)
        A = self._eval_rf(F, self.model.roots[0], reps)
        B = self._eval_rf(F, self.model.roots[1], reps)

        def work(sl):
            a, b = A[sl], B[sl]
            lam = T.mul(b, T.inv(a))
            return -(T.chi[a].astype(np.int64) * S[lam])

        chunks = _chunks(len(reps), self.threads)
        if self.threads > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(self.threads) as ex:
                parts = list(ex.map(work, chunks))
        else:
            parts = [work(c) for c in chunks]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def _per_fiber_traces(self, F: ExtField, reps: np.ndarray, strategy: str) -> np.ndarray:
        m = self.model
        a2, a4, a6 = _short_coeffs(m)
        cols = [self._eval_rf(F, c, reps) for c in (a2, a4, a6)]

        def one(i):
            if strategy == "bsgs" and F.q > 229:
                E = WeierstrassModel(F, 0, F.element(int(cols[0][i])), 0, F.element(int(cols[1][i])),
                                     F.element(int(cols[2][i])))
                return F.q + 1 - bsgs_order(E)
            return _direct_trace(F, (int(cols[0][i]), int(cols[1][i]), int(cols[2][i])))

        idx = list(range(len(reps)))
        if self.threads > 1:
            with ThreadPoolExecutor(self.threads) as ex:
                out = list(ex.map(one, idx))
        else:
            out = [one(i) for i in idx]
        return np.array(out, dtype=np.int64)

    # -- assembling counts ---------------------------------------------------

    def count(self, m: int, use_orbits: bool = True) -> int:
        """#S(F_{p^m})."""
        p = self.p
        Q = p ** m
        total = 0
        for pl in self.special:
            if m % pl.degree:
                continue
            fib = self.fibers[pl]
            if fib.is_good:
                c = Q + 1 - extend_trace(self._special_trace(pl), p ** pl.degree, m // pl.degree)
            else:
                c = singular_fiber_count(fib, p, m)
            total += pl.degree * c
        if use_orbits:
            for d in sympy.divisors(m):
                lev = self._level(d)
                a = lev["traces"]
                if not a.size:
                    continue
                s = _extend_array(a, p ** d, m // d)
                total += d * (len(a) * (Q + 1) - s)
        else:
            F = ExtField(p, m)
            codes = np.arange(F.q, dtype=np.int64)
            codes = self._drop_special(F, codes)
            a = self._traces(F, codes)
            total += len(a) * (Q + 1) - int(a.sum())
        return total

    def trace_vector(self, M: int, r: int = 1) -> TraceVector:
        """Counts over F_{q^m}, q = p^r, for m = 1..M."""
        return TraceVector(self.p ** r, tuple(self.count(r * m) for m in range(1, M + 1)), self.p, r)


def _val_rf(f: RationalFunction, place: Place) -> int:
    if place.is_infinity:
        return f.den.degree - f.num.degree
    return f.num.order_at(place.poly) - f.den.order_at(place.poly)


def _chunks(n: int, k: int):
    if n == 0:
        return []
    k = max(1, min(k, n))
    step = -(-n // k)
    return [slice(i, min(n, i + step)) for i in range(0, n, step)]


def _extend_array(a: np.ndarray, qd: int, k: int) -> int:
    """Sum over the array of s_k(a, qd), exact."""
    bound = 2 * (qd ** k) ** 0.5 * max(1, len(a))
    if bound < 2 ** 62 and qd ** k < 2 ** 60:
        s0 = np.full_like(a, 2)
        s1 = a.copy()
        if k == 0:
            return int(s0.sum())
        for _ in range(k - 1):
            s0, s1 = s1, a * s1 - qd * s0
        return int(s1.sum())
    return sum(extend_trace(int(x), qd, k) for x in a)


def model_fingerprint(model: WeierstrassModel) -> str:
    """Stable hash of a model's coefficients (text of the a-invariants and roots)."""
    parts = [repr(model.base)]
    for c in model.a:
        parts.append(c.to_string() if hasattr(c, "to_string") else str(c))
    if model.roots is not None:
        parts += [c.to_string() for c in model.roots]
    return hashlib.sha256("|".join(parts).encode()).hexdigest()[:16]


def surface_count(model: WeierstrassModel, M: int, r: int = 1, strategy: str = "auto", threads: int = 1,
                  cache=None) -> TraceVector:
    """TraceVector of #S(F_{q^m}), q = p^r, m = 1..M, for a model over F_p(t)."""
    return SurfaceCounter(model, strategy=strategy, threads=threads, cache=cache).trace_vector(M, r)


# ---------------------------------------------------------------------------
# brute-force oracle


NAIVE_LIMIT = 20000


def naive_oracle_count(model: WeierstrassModel, m: int) -> int:
    """Direct count: every t in P^1(F_{p^m}), every x, plus resolution of singular points.

    Fibers are evaluated on a minimal Weierstrass model at each point.  A
    singular fiber contributes the points of the singular cubic minus the
    singular point plus the exceptional curves of its resolution: a chain
    of n - 1 lines for a node (A_{n-1}; all rational if the node is split,
    reversed by Frobenius otherwise) and the n + 4 exceptional curves of an
    I_n* fiber.  Legendre models only.
    """
    K = model.base.constants
    p = K.p
    F = ExtField(p, m)
    if (F.q + 1) > NAIVE_LIMIT:
        raise CountingError("size limit exceeded for the naive oracle")
    if model.roots is None:
        raise CountingError("the naive oracle handles factored models")
    T = F.tables
    xs = np.arange(F.q, dtype=np.int64)
    Q = F.q
    total = 0
    points = [("inf", None)] + [("t", v) for v in range(Q)]
    r, s = model.roots
    for kind, v in points:
        e1, e2, nu = _naive_minimal_roots(F, r, s, v)
        # affine points: x (x - e1)(x - e2)
        f = T.mul(T.mul(xs, T.sub(xs, np.full_like(xs, e1))), T.sub(xs, np.full_like(xs, e2)))
        chi = T.chi[f].astype(np.int64)
        cubic = Q + 1 + int(chi.sum())
        if e1 != 0 and e2 != 0 and e1 != e2:
            total += cubic
            continue
        if e1 == 0 and e2 == 0:
            # triple root: I_n* with n = v(disc_min) - 6
            n = nu - 6
            total += (cubic - 1) + (n + 4) * (Q + 1) - (n + 3)
            continue
        # node: n = v(disc_min); split iff the cubic has Q points (node plus Q - 1 smooth points)
        n = nu
        split = cubic == Q
        if n - 1 == 0:
            chain = 0
        elif split:
            chain = (n - 1) * (Q + 1) - (n - 2)
        else:
            # chain E_1..E_{n-1} reversed: fixed middle curve if n even, fixed middle point if n odd
            chain = (Q + 1) if n % 2 == 0 else 1
        total += (cubic - 1) + chain
    return total


def _naive_minimal_roots(F: ExtField, r: RationalFunction, s: RationalFunction, v):
    """Roots e1, e2 (codes) of a minimal model at t = v (v None: infinity) and v(disc) there."""
    p = F.p

    def val_at(f: Poly, point):
        # order of vanishing of f at the point (over F): count derivatives / use division by (t - point)
        if point is None:
            return None
        k = 0
        g = [F(int(c)) for c in f.c]
        while g:
            # synthetic division by (t - point)
            acc = F(0)
            quo = []
            for c in reversed(g):
                acc = acc * point + c
                quo.append(acc)
            rem = quo.pop()
            if rem:
                return k
            g = list(reversed(quo))
            k += 1
        return k

    def ord_rf(f: RationalFunction, point):
        if not f:
            return 10 ** 9
        if point is None:
            return f.den.degree - f.num.degree
        return val_at(f.num, point) - val_at(f.den, point)

    point = None if v is None else F.element(v)
    diffs = [r, s, r - s]
    vals = [ord_rf(f, point) for f in diffs]
    k = min(vals) // 2

    def lead(f: RationalFunction):
        # value of f * pi^(-2k) at the point, pi = t - point (or 1/t)
        if not f or ord_rf(f, point) > 2 * k:
            return 0
        if point is None:
            return F(int(f.num.lc) * pow(int(f.den.lc), -1, p)).v
        num = [F(int(c)) for c in f.num.c]
        den = [F(int(c)) for c in f.den.c]
        num = _divide_out(num, point, val_at(f.num, point))
        den = _divide_out(den, point, val_at(f.den, point))
        return (_horner(num, point) / _horner(den, point)).v

    e1, e2 = lead(r), lead(s)
    nu = sum(vals) * 2 - 12 * k
    return e1, e2, nu


def _horner(cs, x):
    acc = x.field.zero
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _divide_out(cs, point, k):
    for _ in range(k):
        acc = point.field.zero
        quo = []
        for c in reversed(cs):
            acc = acc * point + c
            quo.append(acc)
        quo.pop()
        cs = list(reversed(quo))
    return cs
