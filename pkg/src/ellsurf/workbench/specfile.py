"""Surface spec files (YAML) and the expression parser behind them.

Expressions are rational functions in ``t``; over Q(zeta_8) they may use
``z`` (a primitive 8th root of unity), ``i`` = z^2 and ``sqrt2`` = z - z^3.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import sympy
import yaml
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from ..exact_algebra.fields import QQ, cyclotomic8
from ..exact_algebra.poly import FunctionField, Poly, RationalFunction
from ..weierstrass import Place, WeierstrassModel

FIXTURE_DIR = Path(__file__).with_name("fixtures")

_t, _z = sympy.symbols("t z")
_LOCALS = {"t": _t, "z": _z, "i": _z ** 2, "sqrt2": _z - _z ** 3}
_TRANSFORMS = standard_transformations + (convert_xor,)


class SpecError(ValueError):
    pass


_FIELDS = {}


def constant_field(name: str):
    if name in ("QQ", "Q"):
        return QQ
    if name in ("Q(zeta8)", "QQ(zeta8)"):
        if "zeta8" not in _FIELDS:
            _FIELDS["zeta8"] = cyclotomic8()
        return _FIELDS["zeta8"]
    raise SpecError(f"unknown constant field {name!r}")


def _uses_z(expr) -> bool:
    return _z in expr.free_symbols


def _poly_over(expr, K) -> Poly:
    P = sympy.Poly(sympy.expand(expr), _t, _z)
    deg = P.degree(_t) if not P.is_zero else -1
    rows = [[Fraction(0)] * (P.degree(_z) + 1 if not P.is_zero else 1) for _ in range(deg + 1)]
    for (i, j), c in P.terms():
        if not c:
            continue
        rows[i][j] = Fraction(int(c.p), int(c.q))
    if K == QQ:
        if any(any(r[1:]) for r in rows):
            raise SpecError("expression uses z but the field is QQ")
        return Poly(QQ, [r[0] for r in rows])
    return Poly(K, [K.from_poly_coeffs(r) for r in rows])


def parse_rf(text, K) -> RationalFunction:
    """Exact rational function in t over K from a string such as '-(5*t-1)' or '2*i*(t^2-1)'."""
    try:
        expr = parse_expr(str(text), local_dict=dict(_LOCALS), transformations=_TRANSFORMS)
    except Exception as exc:  # sympy raises a variety of types here
        raise SpecError(f"cannot parse {text!r}: {exc}") from None
    bad = expr.free_symbols - {_t, _z}
    if bad:
        raise SpecError(f"unknown symbols {sorted(map(str, bad))} in {text!r}")
    num, den = sympy.fraction(sympy.together(expr))
    return RationalFunction(_poly_over(num, K)) / RationalFunction(_poly_over(den, K))


def uses_extension(text) -> bool:
    expr = parse_expr(str(text), local_dict=dict(_LOCALS), transformations=_TRANSFORMS)
    return _uses_z(expr)


@dataclass
class SurfaceSpec:
    name: str
    field: str
    model: dict
    primes: list = field(default_factory=list)
    depth: int = 4
    extension_degree: int = 1
    strategy: str = "auto"
    sections: dict = field(default_factory=dict)
    torsion: dict = field(default_factory=dict)
    bad_places: list | None = None
    rank: dict = field(default_factory=dict)
    descent: dict = field(default_factory=dict)
    section_field: str | None = None
    text: str = ""
    path: str = ""

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()

    # -- models ------------------------------------------------------------

    def base(self, field_name: str | None = None) -> FunctionField:
        return FunctionField(constant_field(field_name or self.field))

    def build_model(self, field_name: str | None = None) -> WeierstrassModel:
        QT = self.base(field_name)
        K = QT.constants
        m = self.model
        form = m.get("form", "legendre")
        if form == "legendre":
            return WeierstrassModel.factored(QT, parse_rf(m["r"], K), parse_rf(m["s"], K), name=self.name)
        if form == "twisted-legendre":
            return WeierstrassModel.twisted_factored(QT, parse_rf(m["twist"], K), parse_rf(m["r"], K),
                                                     parse_rf(m["s"], K), name=self.name)
        if form == "weierstrass":
            a = [parse_rf(m.get(k, "0"), K) for k in ("a1", "a2", "a3", "a4", "a6")]
            return WeierstrassModel(QT, *a, name=self.name)
        raise SpecError(f"unknown model form {form!r}")

    def section_model(self) -> WeierstrassModel:
        return self.build_model(self.section_field or self.field)

    def points(self, which: str = "sections", model: WeierstrassModel | None = None) -> dict:
        model = model or self.section_model()
        K = model.base.constants
        out = {}
        table = (self.descent or {}).get(which, {}) if which == "extra_points" else getattr(self, which)
        for name, xy in table.items():
            x, y = parse_rf(xy["x"], K), parse_rf(xy["y"], K)
            if xy.get("coordinates") == "untwisted":
                u = parse_rf(self.model["twist"], K)
                x, y = u * x, u * u * y
            try:
                out[name] = model.point(x, y)
            except ValueError as exc:
                raise SpecError(f"{self.name}: {which[:-1]} {name} is not on the curve ({exc})") from None
        return out

    def declared_places(self):
        if not self.bad_places:
            return None
        K = constant_field(self.field)
        out = []
        for txt in self.bad_places:
            if str(txt) in ("oo", "infinity"):
                continue
            out.append(parse_rf(txt, K).num)
        return out


_KEYS = {"name", "field", "model", "primes", "depth", "extension_degree", "strategy", "sections", "torsion",
         "bad_places", "rank", "descent", "section_field"}


def spec_from_text(text: str, path: str = "") -> SurfaceSpec:
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise SpecError("spec must be a mapping")
    unknown = set(data) - _KEYS
    if unknown:
        raise SpecError(f"unknown keys {sorted(unknown)}")
    for req in ("name", "field", "model"):
        if req not in data:
            raise SpecError(f"missing key {req!r}")
    spec = SurfaceSpec(text=text, path=path, **{k: v for k, v in data.items()})
    spec.build_model()  # validates the model
    places = spec.declared_places()
    if places:
        model = spec.build_model()
        D = model.discriminant()
        for g in places:
            if not (D.num % g).is_zero():
                raise SpecError(f"declared place {g.to_string()} does not divide the discriminant")
    return spec


def load_spec(name_or_path) -> SurfaceSpec:
    """Load a spec file by path, or a bundled fixture by name (E1, E1p, E1pp, E2, E2p, E3)."""
    p = Path(str(name_or_path))
    if not p.exists():
        cand = FIXTURE_DIR / f"{name_or_path}.yaml"
        if not cand.exists():
            raise SpecError(f"no spec file or fixture named {name_or_path!r}")
        p = cand
    return spec_from_text(p.read_text(), str(p))


def fixture_names() -> list[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.yaml") if "." not in p.stem)


def load_expected(name: str) -> dict:
    p = FIXTURE_DIR / f"{name}.expected.yaml"
    return yaml.safe_load(p.read_text()) if p.exists() else {}


def place_from_text(text, K) -> Place:
    if str(text) in ("oo", "infinity"):
        return Place.infinity()
    return Place(parse_rf(text, K).num.monic())
