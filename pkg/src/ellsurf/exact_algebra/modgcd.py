"""Modular gcd of univariate polynomials over QQ and number fields.

The Euclidean algorithm over QQ suffers from coefficient growth; here the
monic gcd is computed modulo several word-size primes that split the field
completely (one image per embedding), interpolated back to power-basis
coordinates, combined by CRT, rationally reconstructed and finally verified
by exact division.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .fields import QQ, NFElement, _rational_reconstruct

_PRIME_START = 2 ** 31


def _split_primes(field):
    """Endless generator of (p, roots) with the field modulus totally split mod p."""
    cache = field.__dict__.setdefault("_modgcd_primes", [])
    for item in cache:
        yield item
    p = cache[-1][0] if cache else _PRIME_START
    if field == QQ:
        while True:
            p = sympy.nextprime(p)
            cache.append((p, [0]))
            yield p, [0]
    mod = field.modulus
    d = field.degree
    step = 0
    while True:
        p = sympy.nextprime(p)
        step += 1
        # cheap test: x^p = x mod (modulus, p) means the modulus splits into linear factors
        roots = _roots_mod_p(mod, p)
        if roots is not None and len(roots) == d:
            cache.append((p, roots))
            yield p, roots


def _roots_mod_p(mod, p):
    from ..finite_fields import PrimeField, factor_fp
    from .poly import Poly

    F = PrimeField(p)
    f = Poly(F, mod)
    x = Poly.x(F)
    # x^p mod f
    r = Poly.constant(F, 1)
    b = x
    e = p
    while e:
        if e & 1:
            r = (r * b) % f
        e >>= 1
        if e:
            b = (b * b) % f
    if r != x % f:
        return None
    return sorted((-int(g.c[0])) % p for g, _ in factor_fp(f))


def _coords(c, d):
    if isinstance(c, NFElement):
        return c.coords
    return (Fraction(c),) + (Fraction(0),) * (d - 1)


def _image(poly, p, roots, d):
    """Images of a polynomial over the field at each root, as int lists mod p (low first)."""
    out = [[0] * len(poly.c) for _ in roots]
    pw = [[pow(r, k, p) for k in range(d)] for r in roots]
    for k, c in enumerate(poly.c):
        co = _coords(c, d)
        vals = []
        for q in co:
            if q.denominator % p == 0:
                return None
            vals.append(q.numerator * pow(q.denominator, -1, p) % p if q else 0)
        for j in range(len(roots)):
            out[j][k] = sum(v * w for v, w in zip(vals, pw[j])) % p
    return out


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _gcd_mod(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        # a mod b
        inv = pow(b[-1], -1, p)
        a = a[:]
        db = len(b) - 1
        while len(a) - 1 >= db and a:
            c = a[-1] * inv % p
            shift = len(a) - 1 - db
            if c:
                for j in range(db + 1):
                    a[shift + j] = (a[shift + j] - c * b[j]) % p
            a.pop()
            _trim(a)
        a, b = b, a
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def _interp_matrix(roots, p, d):
    """Inverse Vandermonde mod p: coords = M @ values."""
    V = sympy.Matrix([[pow(r, k, p) for k in range(d)] for r in roots])
    inv = V.inv_mod(p)
    return [[int(inv[i, j]) for j in range(d)] for i in range(d)]


def modular_gcd(a, b):
    """Monic gcd of two nonzero polynomials over QQ or a number field."""
    from .poly import Poly

    F = a.field
    d = 1 if F == QQ else F.degree
    M = 1
    acc = None  # list over t-degree of list over coords of residues mod M
    best_deg = None
    for p, roots in _split_primes(F):
        ia, ib = _image(a, p, roots, d), _image(b, p, roots, d)
        if ia is None or ib is None:
            continue
        if any(len(_trim(x[:])) != len(a.c) for x in ia) or any(len(_trim(x[:])) != len(b.c) for x in ib):
            # leading coefficient vanishes at some embedding
            continue
        gs = [_gcd_mod(x, y, p) for x, y in zip(ia, ib)]
        degs = {len(g) - 1 for g in gs}
        if len(degs) != 1:
            continue
        deg = degs.pop()
        if deg == 0:
            return Poly.constant(F, 1)
        if best_deg is not None and deg > best_deg:
            continue
        if d == 1:
            coords = [[g] for g in gs[0]]
        else:
            Minv = _interp_matrix(roots, p, d)
            coords = []
            for k in range(deg + 1):
                vals = [gs[j][k] for j in range(d)]
                coords.append([sum(Minv[i][j] * vals[j] for j in range(d)) % p for i in range(d)])
        if best_deg is None or deg < best_deg:
            best_deg = deg
            acc = coords
            M = p
        else:
            newM = M * p
            for k in range(deg + 1):
                for i in range(d):
                    x, y = acc[k][i], coords[k][i]
                    acc[k][i] = (x + M * ((y - x) * pow(M, -1, p) % p)) % newM
            M = newM
        rec = []
        ok = True
        for k in range(deg + 1):
            row = []
            for i in range(d):
                v = _rational_reconstruct(acc[k][i], M)
                if v is None:
                    ok = False
                    break
                row.append(v)
            if not ok:
                break
            rec.append(row)
        if not ok:
            continue
        if F == QQ:
            g = Poly(F, [r[0] for r in rec])
        else:
            g = Poly(F, [F(r) for r in rec])
        if not (a % g) and not (b % g):
            return g
