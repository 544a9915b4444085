"""Stage functions behind the command line: fibers, counts, spectra, ranks and descent.

Every stage returns plain data (dicts, lists, ints, strings) so that reports
serialize exactly and deterministically.
"""

from __future__ import annotations

import csv
import io
import json
from functools import lru_cache
from fractions import Fraction

import numpy as np
import sympy

from .. import __version__
from ..counting import SurfaceCounter, model_fingerprint
from ..exact_algebra.fields import QQ
from ..exact_algebra.galois import power_automorphism
from ..finite_fields import ExtField
from ..frobenius_spectra import (CharPoly, artin_tate_class, cyclotomic_count, discriminant_gate,
                                 picard_bound, picard_charpoly_from_counts, trivial_lattice_charpoly)
from ..kodaira import bad_places, fiber_table, geometric_configuration, surface_invariants
from ..mordell_weil import (HeightPairing, RankStatement, galois_rank_over_Q, gram_index_bound,
                            psi_nontrivial_cosets, saturation_check, shioda_tate_rank, torsion_subgroup,
                            twist_rank_additivity)
from ..pythagorean import search_report
from ..weierstrass import certify_double_cover, reduce_mod_p
from .specfile import SurfaceSpec, load_spec, parse_rf, spec_from_text

COMMANDS = ("fibers", "count", "charpoly", "picard", "artin-tate", "rank", "descent", "pythagorean")


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.message = message

    def diagnostic(self) -> dict:
        return {"status": "error", "stage": self.stage, "error": self.message}


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, CharPoly):
        return v.factored()
    if hasattr(v, "to_string"):
        return v.to_string()
    return v


# ---------------------------------------------------------------------------
# fibers


def stage_fibers(spec: SurfaceSpec) -> dict:
    model = spec.build_model()
    fibers = bad_places(model, spec.declared_places())
    inv = surface_invariants(model, fibers)
    rows = [{"place": pl, "type": ty, "group": gr, "degree": f.place.degree,
             "split": f.split} for (pl, ty, gr), f in zip(fiber_table(fibers), fibers)]
    return {
        "rows": rows,
        "euler_number": inv.e,
        "chi": inv.chi,
        "kodaira_dimension": inv.kodaira_dim,
        "b2": inv.b2,
        "trivial_rank": inv.trivial_rank,
        "torsion_bound": list(inv.torsion_bound),
    }


# ---------------------------------------------------------------------------
# counting and spectra


class _Context:
    """Per-run state shared by stages (reduced models, counters)."""

    def __init__(self, threads=1, strategy=None, cache=None):
        self.threads = threads
        self.strategy = strategy
        self.cache = cache
        self._counters = {}

    def counter(self, spec: SurfaceSpec, p: int) -> SurfaceCounter:
        key = (spec.digest, p)
        if key not in self._counters:
            model = spec.build_model()
            R = reduce_mod_p(model, p)
            mh = model_fingerprint(R)
            if self.cache is not None:
                self.cache.register_model(mh, spec.text, p)
            self._counters[key] = SurfaceCounter(R, strategy=self.strategy or spec.strategy, threads=self.threads,
                                                 cache=self.cache, model_hash=mh)
        return self._counters[key]


def _configurations(counter: SurfaceCounter, spec: SurfaceSpec):
    model = spec.build_model()
    geo = geometric_configuration(bad_places(model, spec.declared_places()))
    return geo, geometric_configuration(counter.singular_fibers())


def _is_good(counter: SurfaceCounter, spec: SurfaceSpec) -> bool:
    geo, red = _configurations(counter, spec)
    return geo == red


def _check_good(counter: SurfaceCounter, spec: SurfaceSpec, stage: str):
    geo, red = _configurations(counter, spec)
    if geo != red:
        raise PipelineError(stage, f"p = {counter.p} is not a prime of good reduction "
                                   f"(fiber configuration {dict(red)} != {dict(geo)})")


def stage_count(spec: SurfaceSpec, p: int, depth: int, r: int, ctx: _Context) -> dict:
    c = ctx.counter(spec, p)
    tv = c.trace_vector(depth, r)
    return {
        "p": p, "q": tv.q, "counts": list(tv.counts), "h2_traces": tv.traces_h2(),
        "orbits_processed": c.stats["orbits"], "cache_hits": c.stats["cache_hits"],
        "good_reduction": _is_good(c, spec),
    }


def section_frobenius_matrix(spec: SurfaceSpec, p: int):
    """Matrix of Frobenius at p on the declared sections modulo torsion (identity when they are rational)."""
    names = list(spec.sections)
    n = len(names)
    if not n:
        return sympy.zeros(0, 0)
    model = spec.section_model()
    K = model.base.constants
    if K == QQ or p % 8 == 1:
        return sympy.eye(n)
    pts = spec.points("sections", model)
    tors = spec.points("torsion", model) if spec.torsion else {}
    sigma = power_automorphism(K, p % 8)
    rep = galois_rank_over_Q(model, list(pts.values()), [sigma], torsion_points=_torsion_all(model, tors))
    (M,) = rep.matrices.values()
    return sympy.Matrix(M)


def _torsion_all(model, tors):
    from ..mordell_weil import _group_closure

    if not tors:
        return []
    return _group_closure(model, list(tors.values()))


def known_charpoly(spec: SurfaceSpec, counter: SurfaceCounter, r: int, include_sections: bool = True) -> CharPoly:
    p = counter.p
    q = p ** r
    triv = trivial_lattice_charpoly(counter.fibers.values(), p, r)
    if not include_sections or not spec.sections:
        return triv
    M = section_frobenius_matrix(spec, p) ** r
    x = sympy.Symbol("x")
    sec = CharPoly.from_sympy((x * sympy.eye(M.shape[0]) - q * M).det(), q)
    return triv * sec


def stage_charpoly(spec: SurfaceSpec, p: int, depth: int, r: int, ctx: _Context, include_sections=True) -> dict:
    c = ctx.counter(spec, p)
    _check_good(c, spec, "charpoly")
    tv = c.trace_vector(depth, 1)
    known = known_charpoly(spec, c, 1, include_sections)
    b2 = 12 * surface_invariants(spec.build_model()).chi - 2
    res = picard_charpoly_from_counts(tv.counts, known, b2)
    out = {
        "p": p, "counts": list(tv.counts), "known": known.factored(),
        "branches": [{"sign": b.sign, "unknown": b.charpoly.factored() if b.charpoly else None,
                      "weil": b.weil_ok, "extra_traces": b.matches_extra_traces} for b in res.branches],
    }
    if res.ambiguous or not res.accepted:
        raise PipelineError("charpoly", f"duality sign undetermined at p = {p} with depth {depth}")
    full = res.full
    if r > 1:
        full = full.base_change(r)
    out.update({"q": full.q, "charpoly": full.factored(), "coefficients": list(full.coeffs),
                "unknown_factor": res.unknown.factored()})
    out["_full"] = full
    return out


def stage_picard(spec: SurfaceSpec, p: int, depth: int, r: int, ctx: _Context) -> dict:
    out = stage_charpoly(spec, p, depth, r, ctx)
    full = out.pop("_full")
    inv = surface_invariants(spec.build_model())
    sec_rank = _section_rank(spec)
    rep = picard_bound(full, inv.trivial_rank, sec_rank)
    bound_rank = shioda_tate_rank(rep.rank_bound, inv.trivial_rank)
    out.update({
        "cyclotomic_count": rep.cyclotomic, "picard_bound": rep.rank_bound, "trivial_rank": inv.trivial_rank,
        "section_rank": sec_rank, "conclusion": rep.conclusion, "mw_rank_upper": bound_rank,
        "mw_rank": bound_rank if bound_rank == sec_rank else None,
    })
    return out


def stage_artin_tate(spec: SurfaceSpec, primes, depth: int, r: int, ctx: _Context) -> dict:
    rows = []
    classes = []
    bounds = set()
    for p in primes:
        out = stage_charpoly(spec, p, depth, r, ctx)
        full = out.pop("_full")
        k = cyclotomic_count(full)
        cls = artin_tate_class(full)
        classes.append(cls)
        bounds.add(k)
        rows.append({"p": p, "q": full.q, "charpoly": full.factored(), "cyclotomic_count": k, "class": cls})
    if len(bounds) != 1:
        raise PipelineError("artin-tate", f"Picard bounds differ across primes: {sorted(bounds)}")
    (bound,) = bounds
    gate = discriminant_gate(classes, bound)
    return {"rows": rows, "common_bound": bound, "verdict": gate.verdict, "picard_bound": gate.rank_bound
            if gate.rank_bound is not None else bound}


# ---------------------------------------------------------------------------
# ranks


def _section_rank(spec: SurfaceSpec) -> int:
    if not spec.sections:
        return 0
    model = spec.section_model()
    pts = spec.points("sections", model)
    G = sympy.Matrix(HeightPairing(model).gram(list(pts.values())).matrix)
    return G.rank()


def stage_rank(spec: SurfaceSpec, ctx: _Context, _seen=None) -> dict:
    method = spec.rank.get("method", "hodge")
    inv = surface_invariants(spec.build_model(), bad_places(spec.build_model(), spec.declared_places()))
    lower = _section_rank(spec)
    detail = {"method": method, "trivial_rank": inv.trivial_rank, "section_rank": lower}
    if method == "hodge":
        # rho <= h^{1,1} = 10 chi, with equality for rational surfaces (p_g = 0)
        rho = 10 * inv.chi
        upper = shioda_tate_rank(rho, inv.trivial_rank)
        detail["picard"] = {"value": rho, "kind": "exact" if inv.chi == 1 else "upper"}
        if inv.chi == 1:
            lower = upper
    elif method == "picard":
        p = spec.rank.get("prime", spec.primes[0])
        res = stage_picard(spec, p, spec.rank.get("depth", spec.depth), 1, ctx)
        upper = res["mw_rank_upper"]
        detail["picard"] = {"value": res["picard_bound"], "kind": "upper", "prime": p, "charpoly": res["charpoly"]}
    elif method == "artin-tate":
        primes = spec.rank.get("primes", spec.primes)
        res = stage_artin_tate(spec, primes, spec.rank.get("depth", spec.depth),
                               spec.rank.get("extension_degree", 2), ctx)
        upper = shioda_tate_rank(res["picard_bound"], inv.trivial_rank)
        detail["picard"] = {"value": res["picard_bound"], "kind": "upper", "verdict": res["verdict"],
                            "classes": [row["class"] for row in res["rows"]]}
    elif method == "cover":
        seen = set(_seen or ()) | {spec.name}
        base = load_spec(spec.rank["base"])
        twist = load_spec(spec.rank["twist"])
        for s in (base, twist):
            if s.name in seen:
                raise PipelineError("rank", f"cyclic cover chain at {s.name}")
        phi = parse_rf(spec.rank["phi"], QQ)
        try:
            cert = certify_double_cover(base.build_model(), spec.build_model(), phi, twist.build_model())
        except ValueError as exc:
            raise PipelineError("rank", f"cover certificate failed: {exc}") from None
        rb = stage_rank(base, ctx, seen)
        rt = stage_rank(twist, ctx, seen)
        if rb["rank"] is None or rt["rank"] is None:
            raise PipelineError("rank", "component ranks undetermined")
        st = twist_rank_additivity(cert, RankStatement(base.name, rb["rank"], "exact"),
                                   RankStatement(twist.name, rt["rank"], "exact"), spec.name)
        detail.update({"cover": spec.rank["phi"], "discriminant": cert.detail["discriminant"].to_string(),
                       "components": {base.name: rb, twist.name: rt}})
        return {"model": spec.name, "rank": st.rank, "upper": st.rank, "lower": st.rank, "detail": detail,
                "provenance": list(st.provenance)}
    else:
        raise PipelineError("rank", f"unknown rank method {method!r}")
    if lower > upper:
        raise PipelineError("rank", f"section rank {lower} exceeds the upper bound {upper}")
    return {"model": spec.name, "rank": upper if lower == upper else None, "upper": upper, "lower": lower,
            "detail": detail}


# ---------------------------------------------------------------------------
# descent


def stage_descent(spec: SurfaceSpec) -> dict:
    cfg = spec.descent or {}
    model = spec.section_model()
    pts = spec.points("sections", model)
    tors = spec.points("torsion", model)
    hp = HeightPairing(model)
    scale = int(cfg.get("scale", 1))
    G = hp.gram(list(pts.values()), scale)
    det, admissible = gram_index_bound(G)
    tor = torsion_subgroup(model)
    e1, e2 = cfg.get("roots", [0, 2])
    sat = saturation_check(model, pts, tors, tor.structure, admissible, e1_index=e1, e2_index=e2,
                           subsets=[cfg["image_subset"]] if cfg.get("image_subset") else ())
    out = {
        "generators": list(pts),
        "heights": {n: str(hp.height(P)) for n, P in pts.items()},
        "gram_scale": scale,
        "gram": [[str(v) for v in row] for row in G.matrix],
        "gram_det": det,
        "admissible_indices": admissible,
        "torsion_heights": {n: str(hp.height(T)) for n, T in tors.items()},
        "descent_images": {n: [a.to_string(), b.to_string()] for n, (a, b) in sat.images.items()},
        "image_size": sat.image_size,
        "full_size": sat.full_size,
        "subset_image_size": next(iter(sat.subset_sizes.values()), None),
        "saturation": sat.verdict,
        "torsion": {"structure": list(tor.structure), "exponent_bound": tor.exponent_bound,
                    "halving": {k: (v if not isinstance(v, dict) else
                                    {"discriminant": v["discriminant"].to_string(), "square": v["square"]})
                                for k, v in tor.certificates.items()}},
    }
    if cfg.get("extra_points"):
        extra = spec.points("extra_points", model)
        out["extra_heights"] = {name: str(hp.height(P)) for name, P in extra.items()}
    if cfg.get("coset_point"):
        P = pts[cfg["coset_point"]]
        names = list(tors)
        combos = {"O": model.O}
        if len(names) >= 2:
            T1, T2 = tors[names[0]], tors[names[1]]
            combos.update({names[0]: T1, names[1]: T2, f"{names[0]}+{names[1]}": model.add(T1, T2)})
        out["coset_checks"] = psi_nontrivial_cosets(model, P, combos, e1_index=e1, e2_index=e2)
    if cfg.get("sigma"):
        sigmas = [power_automorphism(model.base.constants, k) for k in cfg["sigma"]]
        gal = galois_rank_over_Q(model, list(pts.values()), sigmas, hp, _torsion_all(model, tors))
        qmodel = spec.build_model("QQ")
        qtor = torsion_subgroup(qmodel, mode="rational")
        out["galois"] = {
            "matrices": gal.matrices,
            "rank_over_Q": gal.rank_over_base,
            "rational_generators": [list(pts)[i] for i in gal.rational_generators],
            "rational_torsion": list(qtor.structure),
            "rational_torsion_generators": [f"({_fmt(T.x)}, {_fmt(T.y)})" for T in qtor.generators],
        }
    return out


# ---------------------------------------------------------------------------
# pythagorean


def stage_pythagorean(p_range, q_range) -> dict:
    rep = search_report(p_range, q_range)
    rows = []
    for r in rep.rows:
        pts = r.points
        rows.append({
            "p": r.p, "q": r.q, "a": r.triple.a, "b": r.triple.b, "c": r.triple.c, "u": str(r.u),
            "k": pts.membership.k, "class": "(%d,%d,%d)" % r.canonical.as_tuple(), "t": str(r.t),
            "Q1": f"({pts.Q1.x}, {pts.Q1.y})", "Q2": f"({pts.Q2.x}, {pts.Q2.y})",
            "Q1_non_torsion": pts.non_torsion["Q1"][0], "Q2_non_torsion": pts.non_torsion["Q2"][0],
            "minus_2Q1": f"({pts.minus_two_q1.x}, {pts.minus_two_q1.y})",
            "Q2_equals_minus_Q1": pts.Q2 == pts.curve.neg(pts.Q1),
            "degenerate": pts.degenerate, "rank_lower_bound": r.rank_lower_bound,
        })
    return {"rows": rows, "classes": rep.class_count}


# ---------------------------------------------------------------------------
# orchestration and emission


@lru_cache(maxsize=8)
def _audit_counter(spec_text: str, p: int) -> SurfaceCounter:
    spec = spec_from_text(spec_text)
    return SurfaceCounter(reduce_mod_p(spec.build_model(), p), strategy="char-sum")


@lru_cache(maxsize=8)
def _audit_field(p: int, d: int) -> ExtField:
    return ExtField(p, d)


def recompute_trace(spec_text: str, p: int, d: int, rep: int) -> int:
    """Trace of Frobenius on one fiber by direct summation (cache audits)."""
    c = _audit_counter(spec_text, p)
    F = _audit_field(p, d)
    return int(c._per_fiber_traces(F, np.array([rep], dtype=np.int64), "char-sum")[0])


def run_pipeline(spec: SurfaceSpec | None, command: str, primes=None, depth=None, extension_degree=None,
                 threads: int = 1, strategy: str | None = None, cache=None, box=None) -> dict:
    """Run one command and return a report dict (raises PipelineError naming the failing stage)."""
    if command not in COMMANDS:
        raise PipelineError("cli", f"unknown command {command!r}")
    ctx = _Context(threads, strategy, cache)
    inputs = {"command": command}
    report = {"tool": "ellsurf", "version": __version__}
    if spec is not None:
        primes = list(primes or spec.primes)
        depth = depth or spec.depth
        r = extension_degree or spec.extension_degree
        report.update({"spec": spec.name, "spec_sha256": spec.digest})
        inputs.update({"primes": primes, "depth": depth, "extension_degree": r,
                       "strategy": strategy or spec.strategy})
    try:
        if command == "fibers":
            result = stage_fibers(spec)
        elif command == "count":
            result = {"rows": [stage_count(spec, p, depth, r, ctx) for p in primes]}
        elif command == "charpoly":
            rows = []
            for p in primes:
                out = stage_charpoly(spec, p, depth, r, ctx)
                out.pop("_full")
                rows.append(out)
            result = {"rows": rows}
        elif command == "picard":
            rows = []
            for p in primes:
                out = stage_picard(spec, p, depth, r, ctx)
                rows.append(out)
            result = {"rows": rows}
        elif command == "artin-tate":
            result = stage_artin_tate(spec, primes, depth, r, ctx)
        elif command == "rank":
            result = stage_rank(spec, ctx)
        elif command == "descent":
            result = stage_descent(spec)
        else:
            lo, hi = box or (1, 6)
            inputs["box"] = [lo, hi]
            result = stage_pythagorean(range(lo, hi + 1), range(lo, hi + 1))
    except PipelineError:
        raise
    except (ValueError, ArithmeticError) as exc:
        raise PipelineError(command, str(exc)) from None
    report["inputs"] = inputs
    report["result"] = _plain(result)
    return report


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, (np.integer,)):
        return int(v)
    return str(_fmt(v))


# point counts, traces and polynomial coefficients leave the tool as decimal strings
EXACT_KEYS = frozenset({"counts", "h2_traces", "coefficients"})


def _exact_strings(v, key=None):
    if isinstance(v, dict):
        return {k: _exact_strings(x, k) for k, x in v.items()}
    if isinstance(v, list):
        return [_exact_strings(x, key) for x in v]
    if key in EXACT_KEYS and isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    return v


def emit(report: dict, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(_exact_strings(report), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        rows = report.get("result", {}).get("rows")
        w = csv.writer(buf, lineterminator="\n")
        if rows and all(isinstance(r, dict) for r in rows):
            keys = list(rows[0])
            w.writerow(keys)
            for row in rows:
                w.writerow([json.dumps(row[k]) if isinstance(row[k], (list, dict)) else row[k] for k in keys])
        else:
            w.writerow(["key", "value"])
            for k, v in _flatten(report):
                w.writerow([k, v])
        return buf.getvalue()
    lines = []
    for k, v in _flatten(report):
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def _flatten(v, prefix=""):
    if isinstance(v, dict):
        for k in v:
            yield from _flatten(v[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
        for i, x in enumerate(v):
            yield from _flatten(x, f"{prefix}[{i}]")
    else:
        yield prefix, v if not isinstance(v, list) else " ".join(map(str, v))
