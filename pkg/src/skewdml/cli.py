"""JSON front-end: parse problem instances, run them, print deterministic reports.

Exit codes: 0 success, 2 domain error, 3 schema error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import padic, seqring, skew, sml
from .algebra import Poly, ProjPoint, RatFunc, RFMatrix, smith_normal_form
from .base import DEFAULT_DEGREE_CAP, DEFAULT_HEIGHT_CAP, DEFAULT_STEP_CAP, BaseMap, NotDetected, detect_preperiodic
from .errors import DimensionMismatch, DomainError, ExactComputationTooLarge, MalformedRational, SchemaError, SchemaViolation, SkewDMLError

log = logging.getLogger("skewdml")

KINDS = ("orbit", "zeros", "decompose", "certify", "padic", "filtration", "snf", "pvmatrix", "classify")

ANCHORS = {
    "orbit": "infinite orbit-curve intersections force a periodic curve",
    "zeros": "zero sets of recurrences over a dynamical base are finite unions of progressions",
    "decompose": "zero sets of recurrences over a dynamical base are finite unions of progressions",
    "certify": "invariant linear subbundle containing the orbit",
    "padic": "p-adic arc through the orbit: preimage of a subvariety is finite or everything",
    "filtration": "images of the cocycle stabilize to a subbundle",
    "snf": "vector bundles on the affine line are trivial",
    "pvmatrix": "fundamental matrix of a difference system over the sequence ring",
    "classify": "non-units of the sequence ring are zero divisors with a periodic zero set",
}


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------


def parse_rat(v: Any, loc: str) -> Fraction:
    if isinstance(v, bool):
        raise MalformedRational(f"expected a rational string, got {v!r}", loc)
    if isinstance(v, int):
        return Fraction(v)
    if not isinstance(v, str):
        raise MalformedRational(f"expected a rational string, got {v!r}", loc)
    text = v.strip().replace("−", "-")
    num, _, den = text.partition("/")
    try:
        n = int(num)
        d = int(den) if den else 1
    except ValueError:
        raise MalformedRational(f"not a rational: {v!r}", loc) from None
    if d == 0:
        raise MalformedRational(f"zero denominator in {v!r}", loc)
    return Fraction(n, d)


def parse_poly(v: Any, loc: str) -> Poly:
    if not isinstance(v, list):
        raise SchemaViolation(f"expected a coefficient array, got {v!r}", loc)
    return Poly([parse_rat(c, f"{loc}[{i}]") for i, c in enumerate(v)])


def parse_ratfunc(v: Any, loc: str) -> RatFunc:
    if isinstance(v, (str, int)) and not isinstance(v, bool):
        return RatFunc.const(parse_rat(v, loc))
    if isinstance(v, list):
        return RatFunc(parse_poly(v, loc))
    if isinstance(v, dict):
        extra = set(v) - {"num", "den"}
        if extra or "num" not in v:
            raise SchemaViolation(f"rational function needs 'num' (and optional 'den'), got keys {sorted(v)}", loc)
        num = parse_poly(v["num"], f"{loc}.num")
        den = parse_poly(v.get("den", ["1"]), f"{loc}.den")
        if not den:
            raise SchemaViolation("zero denominator", f"{loc}.den")
        return RatFunc(num, den)
    raise SchemaViolation(f"expected a rational function, got {v!r}", loc)


def parse_matrix(v: Any, loc: str) -> RFMatrix:
    if not isinstance(v, list) or not v or not all(isinstance(r, list) for r in v):
        raise DimensionMismatch("matrix must be a non-empty array of rows", loc)
    width = len(v[0])
    if width == 0 or any(len(r) != width for r in v):
        raise DimensionMismatch(f"ragged matrix rows: {[len(r) for r in v]}", loc)
    return RFMatrix([[parse_ratfunc(e, f"{loc}[{i}][{j}]") for j, e in enumerate(r)] for i, r in enumerate(v)])


def parse_base_point(v: Any, loc: str) -> ProjPoint:
    if isinstance(v, str) and v.strip() == "inf":
        return ProjPoint.infinity()
    return ProjPoint.of(parse_rat(v, loc))


def parse_base_map(v: Any, loc: str) -> BaseMap:
    try:
        return BaseMap(parse_ratfunc(v, loc))
    except ValueError as exc:
        raise SchemaViolation(str(exc), loc) from None


def parse_system(v: Any, loc: str) -> skew.SkewSystem:
    _require(v, ("g", "A"), loc)
    A = parse_matrix(v["A"], f"{loc}.A")
    if A.rows != A.cols:
        raise DimensionMismatch(f"A must be square, got {A.rows}x{A.cols}", f"{loc}.A")
    return skew.SkewSystem(parse_base_map(v["g"], f"{loc}.g"), A)


def parse_point(v: Any, loc: str, N: int | None = None) -> skew.SkewPoint:
    _require(v, ("x", "y"), loc)
    if not isinstance(v["y"], list):
        raise SchemaViolation("fiber must be an array", f"{loc}.y")
    y = tuple(parse_rat(c, f"{loc}.y[{i}]") for i, c in enumerate(v["y"]))
    if N is not None and len(y) != N:
        raise DimensionMismatch(f"fiber has {len(y)} coordinates, system has N={N}", f"{loc}.y")
    return skew.SkewPoint(parse_base_point(v["x"], f"{loc}.x"), y)


def parse_recurrence(v: Any, loc: str) -> sml.Recurrence:
    _require(v, ("order", "h", "g", "alpha", "init"), loc)
    order = v["order"]
    if not isinstance(order, int) or isinstance(order, bool) or order < 1:
        raise SchemaViolation("order must be a positive integer", f"{loc}.order")
    if not isinstance(v["h"], list) or len(v["h"]) != order:
        raise DimensionMismatch(f"expected {order} coefficients", f"{loc}.h")
    if not isinstance(v["init"], list) or len(v["init"]) != order:
        raise DimensionMismatch(f"expected {order} initial terms", f"{loc}.init")
    return sml.Recurrence(
        order,
        tuple(parse_ratfunc(h, f"{loc}.h[{i}]") for i, h in enumerate(v["h"])),
        parse_base_map(v["g"], f"{loc}.g"),
        parse_base_point(v["alpha"], f"{loc}.alpha"),
        tuple(parse_rat(a, f"{loc}.init[{i}]") for i, a in enumerate(v["init"])),
    )


def parse_mpoly(v: Any, loc: str, N: int) -> skew.MPoly:
    if not isinstance(v, list):
        raise SchemaViolation("polynomial must be an array of monomials", loc)
    terms: dict = {}
    for i, m in enumerate(v):
        _require(m, ("c", "e"), f"{loc}[{i}]")
        e = m["e"]
        if not isinstance(e, list) or len(e) != N + 1 or not all(isinstance(k, int) and k >= 0 for k in e):
            raise DimensionMismatch(f"exponent must list {N + 1} non-negative integers", f"{loc}[{i}].e")
        key = tuple(e)
        terms[key] = terms.get(key, Fraction(0)) + parse_rat(m["c"], f"{loc}[{i}].c")
    return skew.MPoly(terms, N)


def _require(v: Any, keys: tuple[str, ...], loc: str) -> None:
    if not isinstance(v, dict):
        raise SchemaViolation(f"expected an object with keys {list(keys)}", loc)
    missing = [k for k in keys if k not in v]
    if missing:
        raise SchemaViolation(f"missing keys {missing}", loc)


def _int(v: Any, loc: str, minimum: int = 0) -> int:
    if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
        raise SchemaViolation(f"expected an integer >= {minimum}", loc)
    return v


@dataclass
class ProblemInstance:
    kind: str
    payload: dict


def _parse_payload(doc: dict, loc: str) -> ProblemInstance:
    _require(doc, ("kind",), loc)
    kind = doc["kind"]
    if kind not in KINDS:
        raise SchemaViolation(f"unknown kind {kind!r}; expected one of {list(KINDS)}", f"{loc}.kind")
    p: dict = {}
    if kind in ("orbit", "padic", "filtration", "pvmatrix"):
        _require(doc, ("system",), loc)
        p["system"] = parse_system(doc["system"], f"{loc}.system")
        N = p["system"].N
        if kind in ("orbit", "padic"):
            _require(doc, ("start",), loc)
            p["start"] = parse_point(doc["start"], f"{loc}.start", N)
        if kind == "orbit":
            if "n" in doc:
                p["n"] = _int(doc["n"], f"{loc}.n")
            if "variety" in doc:
                if not isinstance(doc["variety"], list):
                    raise SchemaViolation("variety must be an array of polynomials", f"{loc}.variety")
                p["variety"] = [parse_mpoly(q, f"{loc}.variety[{i}]", N) for i, q in enumerate(doc["variety"])]
        if kind == "padic" and "form" in doc:
            f = doc["form"]
            if not isinstance(f, list) or len(f) != N + 1:
                raise DimensionMismatch(f"form needs {N + 1} coefficients", f"{loc}.form")
            p["form"] = [parse_rat(c, f"{loc}.form[{i}]") for i, c in enumerate(f)]
        if kind == "pvmatrix":
            _require(doc, ("alpha",), loc)
            p["alpha"] = parse_base_point(doc["alpha"], f"{loc}.alpha")
    elif kind in ("zeros", "certify"):
        _require(doc, ("recurrence",), loc)
        p["recurrence"] = parse_recurrence(doc["recurrence"], f"{loc}.recurrence")
        if kind == "certify":
            _require(doc, ("progression",), loc)
            pr = doc["progression"]
            if not isinstance(pr, list) or len(pr) != 2:
                raise SchemaViolation("progression must be [c, d]", f"{loc}.progression")
            p["progression"] = (_int(pr[0], f"{loc}.progression[0]"), _int(pr[1], f"{loc}.progression[1]", 1))
    elif kind == "decompose":
        _require(doc, ("zeros", "n_max"), loc)
        if not isinstance(doc["zeros"], list):
            raise SchemaViolation("zeros must be an array", f"{loc}.zeros")
        p["zeros"] = sorted(_int(z, f"{loc}.zeros[{i}]") for i, z in enumerate(doc["zeros"]))
        p["n_max"] = _int(doc["n_max"], f"{loc}.n_max")
    elif kind == "snf":
        _require(doc, ("matrix",), loc)
        M = parse_matrix(doc["matrix"], f"{loc}.matrix")
        if not all(e.is_polynomial() for row in M.entries for e in row):
            raise SchemaViolation("Smith normal form needs polynomial entries", f"{loc}.matrix")
        p["matrix"] = M
    elif kind == "classify":
        _require(doc, ("recurrence",), loc)
        p["recurrence"] = parse_recurrence(doc["recurrence"], f"{loc}.recurrence")
    return ProblemInstance(kind, p)


def parse_document(text: str) -> tuple[list[ProblemInstance], bool]:
    """Parse one instance or a batch {"instances": [...]}; the flag tells which."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if isinstance(doc, dict) and "instances" in doc and "kind" not in doc:
        items = doc["instances"]
        if not isinstance(items, list):
            raise SchemaViolation("instances must be an array", "$.instances")
        return [_parse_payload(d, f"$.instances[{i}]") for i, d in enumerate(items)], True
    return [_parse_payload(doc, "$")], False


def parse_instance(text: str) -> ProblemInstance:
    insts, batch = parse_document(text)
    if batch:
        raise SchemaViolation("expected a single instance, got a batch", "$")
    return insts[0]


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def rat_str(q: Fraction) -> str:
    return str(q)


def dump_poly(p: Poly) -> list[str]:
    return [rat_str(c) for c in p.coeffs]


def dump_ratfunc(h: RatFunc) -> Any:
    if h.is_constant():
        return rat_str(h.constant_value())
    if h.den == Poly.const(1):
        return {"num": dump_poly(h.num)}
    return {"num": dump_poly(h.num), "den": dump_poly(h.den)}


def dump_matrix(M: RFMatrix) -> list:
    return [[dump_ratfunc(e) for e in row] for row in M.entries]


def dump_base_point(pt: ProjPoint) -> str:
    return "inf" if pt.is_infinity else rat_str(pt.value)


def dump_point(pt: skew.SkewPoint) -> dict:
    return {"x": dump_base_point(pt.base), "y": [rat_str(v) for v in pt.fiber]}


def dump_system(s: skew.SkewSystem) -> dict:
    return {"g": dump_ratfunc(s.g.h), "A": dump_matrix(s.A)}


def dump_recurrence(r: sml.Recurrence) -> dict:
    return {
        "order": r.order,
        "h": [dump_ratfunc(h) for h in r.h],
        "g": dump_ratfunc(r.g.h),
        "alpha": dump_base_point(r.alpha),
        "init": [rat_str(a) for a in r.init],
    }


def dump_mpoly(q: skew.MPoly) -> list:
    return [{"c": rat_str(c), "e": list(e)} for e, c in sorted(q.terms.items())]


def dump_instance(inst: ProblemInstance) -> dict:
    out: dict = {"kind": inst.kind}
    for key, val in inst.payload.items():
        if key == "system":
            out[key] = dump_system(val)
        elif key == "start":
            out[key] = dump_point(val)
        elif key == "recurrence":
            out[key] = dump_recurrence(val)
        elif key == "variety":
            out[key] = [dump_mpoly(q) for q in val]
        elif key == "form":
            out[key] = [rat_str(c) for c in val]
        elif key == "alpha":
            out[key] = dump_base_point(val)
        elif key == "matrix":
            out[key] = dump_matrix(val)
        elif key == "progression":
            out[key] = list(val)
        else:
            out[key] = val
    return out


def _mat(M) -> list:
    return [[rat_str(v) for v in row] for row in M]


def _poly_mat(M: RFMatrix) -> list:
    return [[dump_poly(e.num) for e in row] for row in M.entries]


# --------------------------------------------------------------------------
# running
# --------------------------------------------------------------------------


@dataclass
class Flags:
    n_max: int = 100
    prime: int | None = None
    precision: int = padic.DEFAULT_PRECISION
    period_cap: int | None = None
    margin: int = 3
    degree_bound: int = 1
    step_cap: int = DEFAULT_STEP_CAP
    height_cap: int = DEFAULT_HEIGHT_CAP
    truncation: int = seqring.DEFAULT_TRUNCATION
    degree_cap: int = DEFAULT_DEGREE_CAP


def _preperiodic_warning(g: BaseMap, alpha: ProjPoint, flags: Flags, warnings: list[str]) -> None:
    v = detect_preperiodic(g, alpha, flags.height_cap, flags.step_cap)
    if isinstance(v, NotDetected):
        warnings.append(
            f"base point assumed not preperiodic (no repetition up to height {v.max_height.bit_length()} bits, {v.steps} steps)"
        )


def _certificate_json(c: sml.Certificate) -> dict:
    return {
        "progression": list(c.progression),
        "status": c.status,
        "degree": c.degree,
        "relations": [[dump_poly(p) for p in r.coeffs] for r in c.relations],
        "reason": c.reason,
    }


def _run_orbit(p: dict, flags: Flags, res: dict, certs: list, warnings: list) -> None:
    system, start = p["system"], p["start"]
    n = p.get("n", flags.n_max)
    orbit = skew.SkewOrbit(system, start, bit_budget=seqring.ORBIT_BIT_BUDGET)
    res["n"] = n
    res["fiber"] = [rat_str(v) for v in orbit.fiber_at(n)]
    try:
        res["base"] = dump_base_point(orbit.base_at(n))
    except ExactComputationTooLarge as exc:
        res["base"] = None
        warnings.append(f"base point not reported: {exc}")
    if "variety" in p:
        hits = skew.orbit_intersection(system, start, p["variety"], flags.n_max)
        res["intersection"] = hits.indices
        if hits.truncated_at is not None:
            res["truncated_at"] = hits.truncated_at
            warnings.append(f"orbit truncated at step {hits.truncated_at}: {hits.reason}")


def _run_zeros(p: dict, flags: Flags, res: dict, certs: list, warnings: list) -> None:
    rec = p["recurrence"]
    zeros = sml.zero_set(rec, flags.n_max)
    ps = sml.decompose_progressions(zeros, flags.n_max, flags.period_cap, flags.margin)
    res["zeros"] = zeros
    res["n_max"] = flags.n_max
    res["progressions"] = [list(pr) for pr in ps.progressions]
    res["verdict"] = _verdict_json(ps.verdict)
    for pr in ps.progressions:
        if pr[1] >= 1:
            c = sml.certify_progression(rec, pr, degree_bound=flags.degree_bound, degree_cap=flags.degree_cap)
            certs.append(_certificate_json(c))
            if not c.certified:
                warnings.append(f"progression {list(pr)} is heuristic only: {c.reason}")
    if isinstance(ps.verdict, sml.Inconclusive):
        warnings.append("no eventually periodic pattern fits the window")
    if rec.g.degree == 1:
        warnings.append("degree-1 base: the progression structure is conjectural beyond certified progressions")


def _verdict_json(v) -> dict:
    if isinstance(v, sml.Consistent):
        return {"kind": "Consistent", "preperiod": v.preperiod, "period": v.period}
    return {"kind": "Inconclusive"}


def _run_decompose(p: dict, flags: Flags, res: dict, certs: list, warnings: list) -> None:
    zs = p["zeros"]
    if zs and zs[-1] > p["n_max"]:
        raise SchemaViolation("zeros exceed n_max", "$.zeros")
    ps = sml.decompose_progressions(zs, p["n_max"], flags.period_cap, flags.margin)
    res["progressions"] = [list(pr) for pr in ps.progressions]
    res["verdict"] = _verdict_json(ps.verdict)
    if any(d >= 1 for _, d in ps.progressions):
        warnings.append("progressions inferred from a finite window are heuristic without a certificate")


def _run_certify(p: dict, flags: Flags, res: dict, certs: list, warnings: list) -> None:
    c = sml.certify_progression(p["recurrence"], p["progression"], degree_bound=flags.degree_bound,
                                degree_cap=flags.degree_cap)
    certs.append(_certificate_json(c))
    res["status"] = c.status


def _run_padic(p: dict, flags: Flags, res: dict, certs: list, warnings: list) -> None:
    system, start = p["system"], p["start"]
    cands = [flags.prime] if flags.prime else None
    choice = padic.select_prime(system, start, cands)
    if isinstance(choice, padic.NoneFound):
        res["prime"] = None
        res["rejections"] = [{"prime": k, "reason": v} for k, v in sorted(choice.reasons.items())]
        return
    ctx = padic.PadicContext(choice.p, flags.precision)
    res["prime"] = choice.p
    res["shift"] = choice.shift
    ro = padic.residue_orbit(system, ctx, start, choice)
    res["residue_orbit"] = {"preperiod": ro.preperiod, "period": ro.period}
    att = padic.attuned_iterate(system, ctx, start, choice=choice)
    if isinstance(att, padic.NotFound):
        res["attuned"] = {"found": False, "reason": att.reason}
        return
    res["attuned"] = {"found": True, "m": att.m, "ell": att.ell, "samples": att.samples}
    if "form" in p:
        rep = padic.dml_classify(system, start, p["form"], ctx, flags.n_max)
        res["prefix_zeros"] = rep.prefix_zeros
        res["classes"] = [
            {
                "c": c.c,
                "kind": c.kind,
                "bound": c.bound,
                "observed": c.observed,
                "cross_checked": c.cross_checked,
                "reason": c.reason,
                "slopes": c.mahler.slopes if c.mahler else None,
            }
            for c in rep.classes
        ]
    if system.g.degree >= 2:
        _preperiodic_warning(system.g, start.base, flags, warnings)


def _run_filtration(p: dict, flags: Flags, res: dict, certs: list, warnings: list) -> None:
    system = p["system"]
    f = skew.image_filtration(system, flags.degree_cap)
    res["step"] = f.step
    res["rank"] = f.rank
    res["ranks"] = f.ranks
    res["basis"] = [[dump_ratfunc(e) for e in col] for col in f.basis.columns]
    res["invariant"] = f.invariant.holds
    if not f.basis_certified:
        warnings.append("base map of degree >= 2: only the generic rank is certified, not the basis")


def _run_snf(p: dict, flags: Flags, res: dict, certs: list, warnings: list) -> None:
    r = smith_normal_form(p["matrix"])
    res["U"], res["D"], res["V"] = _poly_mat(r.U), _poly_mat(r.D), _poly_mat(r.V)
    res["invariant_factors"] = [dump_poly(q) for q in r.invariant_factors]


def _run_pvmatrix(p: dict, flags: Flags, res: dict, certs: list, warnings: list) -> None:
    system, alpha = p["system"], p["alpha"]
    T = flags.truncation
    fm = seqring.fundamental_matrix(system, alpha, T)
    res["n0"] = fm.n0
    res["T"] = fm.T
    res["Y_T"] = _mat(fm.at(fm.T))
    res["det_Y_T"] = rat_str(fm.dets[-1])
    # constant systems have constant-coefficient entry recurrences
    D = 0 if system.A.is_constant() else flags.degree_bound
    recs = []
    for i in range(system.N):
        for j in range(system.N):
            r = None
            if len(fm.values) >= seqring.min_window(system.N, D):
                r = seqring.find_linear_recurrence(fm.entry(i, j), system.g, alpha, system.N, D)
            recs.append({"entry": [i, j], "recurrence": dump_recurrence(r) if r else None})
    res["entry_recurrences"] = recs
    if system.g.degree >= 2:
        _preperiodic_warning(system.g, alpha, flags, warnings)


def _run_classify(p: dict, flags: Flags, res: dict, certs: list, warnings: list) -> None:
    rec = p["recurrence"]
    s = seqring.Seq(0, sml.sequence_terms(rec, flags.truncation), "recurrence")
    v = seqring.classify_element(s, rec, period_cap=flags.period_cap, margin=flags.margin)
    if isinstance(v, seqring.UnitCandidate):
        res["verdict"] = {"kind": "UnitCandidate", "zeros": list(v.zeros)}
        warnings.append("unit status cannot be proven on a finite window")
    elif isinstance(v, seqring.ZeroDivisor):
        res["verdict"] = {"kind": "ZeroDivisor", "d": v.d, "witness_window": list(v.witness_window)}
        certs.append(_certificate_json(v.certificate))
    else:
        res["verdict"] = {"kind": "Inconclusive", "reason": v.reason, "zeros": list(v.zeros)}
    if rec.g.degree == 1:
        warnings.append("degree-1 base: zero-divisor structure is conjectural")


RUNNERS = {
    "orbit": _run_orbit,
    "zeros": _run_zeros,
    "decompose": _run_decompose,
    "certify": _run_certify,
    "padic": _run_padic,
    "filtration": _run_filtration,
    "snf": _run_snf,
    "pvmatrix": _run_pvmatrix,
    "classify": _run_classify,
}


def run(inst: ProblemInstance, flags: Flags | None = None) -> tuple[dict, int]:
    """Run one instance; returns (report, exit code)."""
    flags = flags or Flags()
    report: dict = {
        "instance": dump_instance(inst),
        "results": {},
        "certificates": [],
        "warnings": [],
        "anchors": [ANCHORS[inst.kind]],
    }
    try:
        RUNNERS[inst.kind](inst.payload, flags, report["results"], report["certificates"], report["warnings"])
    except SkewDMLError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return report, getattr(exc, "exit_code", 2)
    except ValueError as exc:
        report["error"] = {"type": "DomainError", "message": str(exc)}
        return report, DomainError.exit_code
    return report, 0


def _run_pair(args: tuple[ProblemInstance, Flags]) -> tuple[dict, int]:
    return run(*args)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skewdml", description="Exact computations for skew-linear dynamical systems.")
    ap.add_argument("input", nargs="?", default="-", help="instance JSON file ('-' for stdin)")
    ap.add_argument("--n-max", type=int, default=100)
    ap.add_argument("--prime", type=int, default=None)
    ap.add_argument("--precision", type=int, default=padic.DEFAULT_PRECISION)
    ap.add_argument("--period-cap", type=int, default=None)
    ap.add_argument("--margin", type=int, default=3)
    ap.add_argument("--degree-bound", type=int, default=1)
    ap.add_argument("--step-cap", type=int, default=DEFAULT_STEP_CAP)
    ap.add_argument("--height-cap", type=int, default=DEFAULT_HEIGHT_CAP)
    ap.add_argument("--truncation", type=int, default=seqring.DEFAULT_TRUNCATION)
    ap.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    ap.add_argument("--workers", type=int, default=1, help="process pool size for batch documents")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    flags = Flags(args.n_max, args.prime, args.precision, args.period_cap, args.margin, args.degree_bound,
                  args.step_cap, args.height_cap, args.truncation, args.degree_cap)
    try:
        text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return SchemaError.exit_code
    try:
        insts, batch = parse_document(text)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return exc.exit_code
    jobs = [(i, flags) for i in insts]
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            outs = list(pool.map(_run_pair, jobs))
    else:
        outs = [run(*j) for j in jobs]
    for rep, code in outs:
        if code:
            print(f"{rep['error']['type']}: {rep['error']['message']}", file=sys.stderr)
    doc = {"reports": [o[0] for o in outs]} if batch else outs[0][0]
    print(json.dumps(doc, sort_keys=True, indent=2))
    return max((code for _, code in outs), default=0)


if __name__ == "__main__":
    raise SystemExit(main())
