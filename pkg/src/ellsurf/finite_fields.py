"""Finite fields F_p and F_{p^m}, quadratic characters, square roots and
Frobenius orbits on the projective line.

Elements of F_{p^m} are encoded as integers sum c_i p^i (coordinates in the
power basis of the defining modulus).  Besides scalar arithmetic, an
:class:`ExtField` can build numpy log/exp tables for vectorized evaluation,
which is what the counting engine runs on.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
import sympy

from .exact_algebra.poly import Poly, gcd, squarefree_decomposition

TABLE_LIMIT = 1 << 26


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """Tonelli-Shanks square root modulo an odd prime; returns the smaller root."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, tt = 0, t
            while tt != 1:
                tt = tt * tt % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return min(r, p - r)


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


# ---------------------------------------------------------------------------
# prime fields


class PrimeField:
    """F_p as a coefficient field for :class:`Poly`."""

    def __init__(self, p: int):
        if not sympy.isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.degree = 1
        self.q = p
        self.zero = FpElement(self, 0)
        self.one = FpElement(self, 1)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __call__(self, x) -> "FpElement":
        if isinstance(x, FpElement):
            if x.field.p != self.p:
                raise TypeError("mixed prime fields")
            return x
        if isinstance(x, int):
            return FpElement(self, x % self.p)
        # Fraction or anything with numerator/denominator
        num, den = x.numerator, x.denominator
        if den % self.p == 0:
            raise ZeroDivisionError(f"denominator divisible by {self.p}")
        return FpElement(self, num * pow(den, -1, self.p) % self.p)

    def contains(self, x) -> bool:
        return isinstance(x, int) or (isinstance(x, FpElement) and x.field.p == self.p)

    def pth_root(self, x):
        return self(x)

    def character(self, x) -> int:
        if self.p == 2:
            raise ValueError("odd characteristic required")
        return legendre(int(self(x)), self.p)

    def sqrt(self, x):
        r = sqrt_mod_prime(int(self(x)), self.p)
        return None if r is None else FpElement(self, r)

    def is_square(self, x) -> bool:
        return self.sqrt(x) is not None

    def elements(self):
        return [FpElement(self, i) for i in range(self.p)]


class FpElement:
    __slots__ = ("field", "v")

    def __init__(self, field: PrimeField, v: int):
        self.field = field
        self.v = v

    def __int__(self):
        return self.v

    __index__ = __int__

    def _o(self, other):
        if isinstance(other, FpElement):
            return other.v
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return FpElement(self.field, (self.v + o) % self.field.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return FpElement(self.field, (self.v - o) % self.field.p)

    def __rsub__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return FpElement(self.field, (o - self.v) % self.field.p)

    def __neg__(self):
        return FpElement(self.field, (-self.v) % self.field.p)

    def __mul__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return FpElement(self.field, (self.v * o) % self.field.p)

    __rmul__ = __mul__

    def inverse(self):
        if not self.v:
            raise ZeroDivisionError("inverse of zero in F_p")
        return FpElement(self.field, pow(self.v, -1, self.field.p))

    def __truediv__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        if o % self.field.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(self.field, self.v * pow(o, -1, self.field.p) % self.field.p)

    def __rtruediv__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return FpElement(self.field, o % self.field.p) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FpElement(self.field, pow(self.v, n, self.field.p))

    def __eq__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return (self.v - o) % self.field.p == 0

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)


# ---------------------------------------------------------------------------
# polynomials over F_p: irreducibility and factorization


def _powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.constant(base.field, 1)
    b = base % mod
    while e:
        if e & 1:
            result = (result * b) % mod
        e >>= 1
        if e:
            b = (b * b) % mod
    return result


def is_irreducible_fp(f: Poly) -> bool:
    """Rabin's test over a prime field."""
    F = f.field
    p = F.characteristic
    n = f.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    f = f.monic()
    x = Poly.x(F)
    xp = _powmod(x, p ** n, f)
    if xp != x % f:
        return False
    for r in sympy.primefactors(n):
        h = _powmod(x, p ** (n // r), f) - x
        if gcd(h, f).degree > 0:
            return False
    return True


def _ddf(f: Poly):
    F = f.field
    p = F.characteristic
    x = Poly.x(F)
    out = []
    h = x
    i = 0
    g = f
    while g.degree >= 2 * (i + 1):
        i += 1
        h = _powmod(h, p, g)
        d = gcd(h - x, g)
        if d.degree > 0:
            out.append((d, i))
            g = g.exact_div(d)
            h = h % g
    if g.degree > 0:
        out.append((g, g.degree))
    return out


def _edf(f: Poly, d: int, rng: random.Random):
    F = f.field
    p = F.characteristic
    if f.degree == d:
        return [f.monic()]
    while True:
        a = Poly(F, [rng.randrange(p) for _ in range(f.degree)] )
        if a.degree <= 0:
            continue
        g = gcd(a, f)
        if 0 < g.degree < f.degree:
            break
        b = _powmod(a, (p ** d - 1) // 2, f) - 1
        g = gcd(b, f)
        if 0 < g.degree < f.degree:
            break
    return _edf(g, d, rng) + _edf(f.exact_div(g), d, rng)


def factor_fp(f: Poly):
    """Factor over a prime field: sorted list of (monic irreducible, multiplicity)."""
    if f.degree <= 0:
        return []
    rng = random.Random(0x5EED)
    out = []
    for g, m in squarefree_decomposition(f):
        for h, d in _ddf(g):
            for irr in _edf(h, d, rng):
                out.append((irr, m))
    return sorted(out, key=lambda t: (t[0].degree, [int(c) for c in t[0].c], t[1]))


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, m: int) -> Poly:
    """Monic irreducible of degree m over F_p with smallest code sum_{i<m} c_i p^i."""
    F = PrimeField(p)
    if m == 1:
        return Poly(F, [0, 1])
    for code in range(p ** m):
        cs = [(code // p ** i) % p for i in range(m)] + [1]
        if cs[0] == 0:
            continue
        f = Poly(F, cs)
        if is_irreducible_fp(f):
            return f
    raise RuntimeError("no irreducible polynomial found")


# ---------------------------------------------------------------------------
# extension fields


class ExtField:
    """F_{p^m} = F_p[x]/(modulus).

    ``modulus`` defaults to the smallest monic irreducible of degree m (see
    :func:`smallest_irreducible`); a user-supplied one is checked.
    """

    def __init__(self, p: int, m: int = 1, modulus: Poly | None = None):
        if p == 2:
            raise ValueError("odd characteristic required")
        self.p = p
        self.m = m
        self.q = p ** m
        self.characteristic = p
        self.degree = m
        self.base = PrimeField(p)
        if modulus is None:
            modulus = smallest_irreducible(p, m)
        else:
            modulus = Poly(self.base, [int(c) for c in modulus.c]).monic() if isinstance(modulus, Poly) else Poly(self.base, modulus).monic()
            if modulus.degree != m or not is_irreducible_fp(modulus):
                raise ValueError("modulus must be irreducible of degree m over F_p")
        self.modulus = modulus
        self._mod = [int(c) for c in modulus.c]
        self.zero = FFElement(self, 0)
        self.one = FFElement(self, 1)

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other):
        return isinstance(other, ExtField) and (self.p, self._mod) == (other.p, other._mod)

    def __hash__(self):
        return hash(("GFq", self.p, tuple(self._mod)))

    @property
    def presentation(self) -> str:
        """Stable text naming the field presentation (used in cache keys)."""
        return f"{self.p}^{self.m}:" + ",".join(map(str, self._mod))

    # -- encoding --------------------------------------------------------

    def encode(self, coords) -> int:
        return sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coords))

    def decode(self, v: int) -> list[int]:
        out = []
        for _ in range(self.m):
            v, r = divmod(v, self.p)
            out.append(r)
        return out

    def __call__(self, x) -> "FFElement":
        if isinstance(x, FFElement):
            if x.field != self:
                raise TypeError("mixed finite fields")
            return x
        if isinstance(x, FpElement):
            return FFElement(self, x.v)
        if isinstance(x, (list, tuple)):
            return FFElement(self, self.encode(x))
        if isinstance(x, int):
            return FFElement(self, x % self.p)
        return FFElement(self, int(self.base(x)))

    def element(self, code: int) -> "FFElement":
        """Element with integer encoding ``code``."""
        if not 0 <= code < self.q:
            raise ValueError("code out of range")
        return FFElement(self, code)

    def contains(self, x) -> bool:
        return isinstance(x, int) or (isinstance(x, FFElement) and x.field == self)

    @property
    def gen(self) -> "FFElement":
        return self([0, 1]) if self.m > 1 else self(-self._mod[0])

    def elements(self):
        return [FFElement(self, i) for i in range(self.q)]

    # -- scalar arithmetic on coordinate lists ---------------------------

    def _mul_codes(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        ca, cb = self.decode(a), self.decode(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        mod = self._mod
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(m + 1):
                    prod[k - m + j] -= c * mod[j]
        return self.encode(prod[:m])

    def _add_codes(self, a: int, b: int, sign: int = 1) -> int:
        return self.encode([x + sign * y for x, y in zip(self.decode(a), self.decode(b))])

    def pth_root(self, x):
        x = self(x)
        return x ** (self.q // self.p)

    def character(self, x) -> int:
        x = self(x)
        if not x.v:
            return 0
        if self.q <= TABLE_LIMIT and self.__dict__.get("tables") is not None:
            return int(self.tables.chi[x.v])
        r = x ** ((self.q - 1) // 2)
        return 1 if r.v == 1 else -1

    def is_square(self, x) -> bool:
        return self.character(x) >= 0

    def sqrt(self, x) -> "FFElement | None":
        """Tonelli-Shanks in F_q; returns the root with smaller encoding."""
        x = self(x)
        if not x.v:
            return x
        if self.character(x) != 1:
            return None
        q = self.q
        s, t = 0, q - 1
        while t % 2 == 0:
            t //= 2
            s += 1
        z = self.nonresidue
        c = z ** t
        r = x ** ((t + 1) // 2)
        b = x ** t
        mexp = s
        while b.v != 1:
            i, bb = 0, b
            while bb.v != 1:
                bb = bb * bb
                i += 1
            w = c ** (1 << (mexp - i - 1))
            r = r * w
            c = w * w
            b = b * c
            mexp = i
        other = -r
        return r if r.v <= other.v else other

    @cached_property
    def nonresidue(self) -> "FFElement":
        for v in range(1, self.q):
            e = FFElement(self, v)
            if e ** ((self.q - 1) // 2) != self.one:
                return e
        raise RuntimeError("no non-residue")

    def frobenius(self, x, k: int = 1):
        return self(x) ** (self.p ** k)

    def in_subfield(self, x, d: int) -> bool:
        """Frobenius fixed-point test x^{p^d} = x."""
        x = self(x)
        return x ** (self.p ** d) == x

    def minimal_degree(self, x) -> int:
        x = self(x)
        for d in sorted(sympy.divisors(self.m)):
            if self.in_subfield(x, d):
                return d
        return self.m

    @cached_property
    def tables(self) -> "FieldTables":
        return FieldTables(self)


class FFElement:
    __slots__ = ("field", "v")

    def __init__(self, field: ExtField, v: int):
        self.field = field
        self.v = v

    @property
    def coords(self) -> list[int]:
        return self.field.decode(self.v)

    def _o(self, other):
        if isinstance(other, FFElement):
            return other.v
        if isinstance(other, int):
            return other % self.field.p
        if isinstance(other, FpElement):
            return other.v
        return None

    def __add__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._add_codes(self.v, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._add_codes(self.v, o, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FFElement(self.field, self.field._add_codes(0, self.v, -1))

    def __mul__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._mul_codes(self.v, o))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self):
        if not self.v:
            raise ZeroDivisionError("inverse of zero in finite field")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return self * FFElement(self.field, o).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        o = self._o(other)
        if o is None:
            return NotImplemented
        return self.v == o

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        if self.field.m == 1:
            return str(self.v)
        return "[" + ",".join(map(str, self.coords)) + "]"


def quadratic_character(x, field=None) -> int:
    """chi(x) in {-1, 0, 1} for x in F_p or F_{p^m}."""
    if field is None:
        field = x.field
    return field.character(x)


def ff_sqrt(x, field=None):
    if field is None:
        field = x.field
    return field.sqrt(x)


# ---------------------------------------------------------------------------
# vectorized tables


class FieldTables:
    """numpy log/exp/character tables for F_q with elements encoded as ints.

    exp[k] = g^k for a fixed primitive element g, log[exp[k]] = k, log[0] = -1.
    chi[v] is the quadratic character; digit0[v] the constant coordinate.
    """

    def __init__(self, F: ExtField):
        if F.q > TABLE_LIMIT:
            raise ValueError("field too large for tables")
        self.F = F
        p, m, q = F.p, F.m, F.q
        self.q = q
        g = self._primitive_element()
        self.g = g
        exp = np.empty(q - 1, dtype=np.int64)
        # small block of consecutive powers, then multiply blocks by g^B via its F_p-linear matrix
        B = max(1, int(np.sqrt(q - 1)))
        cur = F.one
        for k in range(min(B, q - 1)):
            exp[k] = cur.v
            cur = cur * g
        gB = cur
        mat = self._mult_matrix(gB)
        weights = p ** np.arange(m, dtype=np.int64)
        pos = B
        block = exp[:B].copy()
        while pos < q - 1:
            digits = (block[:, None] // weights[None, :]) % p
            digits = (digits @ mat.T) % p
            block = digits @ weights
            n = min(B, q - 1 - pos)
            exp[pos:pos + n] = block[:n]
            pos += n
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        if (log[1:] < 0).any():
            raise RuntimeError("generator is not primitive")
        self.exp = exp
        self.log = log
        chi = np.zeros(q, dtype=np.int8)
        chi[exp] = np.where(np.arange(q - 1) % 2 == 0, 1, -1)
        self.chi = chi
        self.digit0 = np.arange(q, dtype=np.int64) % p
        self.weights = weights

    def _primitive_element(self):
        F = self.F
        order = F.q - 1
        primes = sympy.primefactors(order)
        for v in range(1, F.q):
            e = FFElement(F, v)
            if all((e ** (order // r)).v != 1 for r in primes):
                return e
        raise RuntimeError("no primitive element")

    def _mult_matrix(self, a: FFElement) -> np.ndarray:
        F = self.F
        cols = [np.array((a * FFElement(F, F.p ** j)).coords, dtype=np.int64) for j in range(F.m)]
        return np.stack(cols, axis=1)

    # vectorized operations on arrays of codes

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % (self.q - 1)]
        return np.where((la < 0) | (lb < 0), 0, out)

    def mul_const(self, a: np.ndarray, c: int) -> np.ndarray:
        if c == 0:
            return np.zeros_like(a)
        la = self.log[a]
        out = self.exp[(la + self.log[c]) % (self.q - 1)]
        return np.where(la < 0, 0, out)

    def inv(self, a: np.ndarray) -> np.ndarray:
        la = self.log[a]
        if (la < 0).any():
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-la) % (self.q - 1)]

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p = self.F.p
        out = np.zeros_like(a)
        for w in self.weights:
            out += (((a // w) % p + (b // w) % p) % p) * w
        return out

    def neg(self, a: np.ndarray) -> np.ndarray:
        p = self.F.p
        out = np.zeros_like(a)
        for w in self.weights:
            out += ((-(a // w)) % p) * w
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def add_prime(self, a: np.ndarray, c: int) -> np.ndarray:
        """a + c for c in F_p (only the constant coordinate changes)."""
        p = self.F.p
        d0 = a % p
        return a - d0 + (d0 + c) % p

    def eval_fp_poly(self, coeffs, t: np.ndarray) -> np.ndarray:
        """Evaluate a polynomial with F_p coefficients (low first) at an array of codes."""
        acc = np.zeros_like(t)
        for c in reversed(list(coeffs)):
            acc = self.add_prime(self.mul(acc, t), int(c) % self.F.p)
        return acc

    def frobenius(self, a: np.ndarray, k: int = 1) -> np.ndarray:
        la = self.log[a]
        out = self.exp[(la * pow(self.F.p, k, self.q - 1)) % (self.q - 1)]
        return np.where(la < 0, 0, out)

    def pow_int(self, a: np.ndarray, n: int) -> np.ndarray:
        la = self.log[a]
        out = self.exp[(la * (n % (self.q - 1))) % (self.q - 1)]
        if n == 0:
            return np.ones_like(a)
        return np.where(la < 0, 0, out)


# ---------------------------------------------------------------------------
# Frobenius orbits on P^1


@dataclass(frozen=True)
class Orbit:
    representative: int | None  # element code; None encodes the point at infinity
    size: int

    @property
    def degree(self) -> int:
        return self.size


@dataclass(frozen=True)
class OrbitDecomposition:
    field: ExtField
    orbits: tuple[Orbit, ...]

    def census(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for o in self.orbits:
            out[o.size] = out.get(o.size, 0) + 1
        return dict(sorted(out.items()))

    def total(self) -> int:
        return sum(o.size for o in self.orbits)


def orbit_arrays(F: ExtField, exact_degree: int | None = None):
    """Minimal-code orbit representatives of F_q under x -> x^p and their orbit sizes.

    Returns (reps, sizes) numpy arrays covering the affine line; with
    ``exact_degree`` only orbits of that size are returned.
    """
    T = F.tables
    q = F.q
    codes = np.arange(q, dtype=np.int64)
    rep = codes.copy()
    size = np.zeros(q, dtype=np.int64)
    cur = codes
    for k in range(1, F.m + 1):
        cur = T.frobenius(cur, 1)
        rep = np.minimum(rep, cur)
        newly = (size == 0) & (cur == codes)
        size[newly] = k
    mask = rep == codes
    if exact_degree is not None:
        mask &= size == exact_degree
    return codes[mask], size[mask]


def frobenius_orbits_P1(F: ExtField) -> OrbitDecomposition:
    """Partition P^1(F_{p^m}) into orbits of the p-power Frobenius; infinity is a fixed point."""
    reps, sizes = orbit_arrays(F)
    orbits = [Orbit(None, 1)] + [Orbit(int(r), int(s)) for r, s in zip(reps, sizes)]
    return OrbitDecomposition(F, tuple(orbits))
