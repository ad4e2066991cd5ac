"""Command-line interface: validate, irr, clean, zcar, chi, newton, oracle.

Exit codes: 0 ok, 2 invalid input, 3 cleanness prerequisite unmet,
4 internal assertion failure (integrality violations).  Output is
deterministic; --json switches to machine-readable JSON with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .cdvf import FactorizationError, newton_polygon, orbit_integrality_violations, \
    refined_residue
from .cycles import IntegralityError as CycleIntegralityError
from .cycles import hilbert_dim, monomial_char_cycle
from .euler import Curve, GeometryError, IntegralityError, Surface, \
    chi_EP, chi_curve, chi_surface_kato, derham_oracle_curve, kashiwara_dubson
from .goodmodel import (clean_at_point, irregularity_divisor, nonclean_locus,
                        numerically_clean_at_point, refined_form,
                        validate_good_decomposition, zcar_prime, CodimensionError)
from .modeldoc import SchemaError, load_json, parse_model_document, \
    parse_operator_document
from .series import PrecisionError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_CLEAN = 3
EXIT_ASSERTION = 4


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        _fail(f"invalid input: {exc}")
        return EXIT_INVALID
    except (IntegralityError, CycleIntegralityError, CodimensionError) as exc:
        _fail(f"internal assertion failure: {exc}")
        return EXIT_ASSERTION
    except (GeometryError, PrecisionError, FactorizationError, ValueError) as exc:
        _fail(f"invalid input: {exc}")
        return EXIT_INVALID


def _fail(msg):
    print(msg, file=sys.stderr)


def _build_parser():
    p = argparse.ArgumentParser(prog="logchar",
                                description="exact log-characteristic cycle engine")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check the good-decomposition conditions")
    v.add_argument("file")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_validate)

    ir = sub.add_parser("irr", help="irregularity divisors and refined forms")
    ir.add_argument("file")
    ir.add_argument("--json", action="store_true")
    ir.set_defaults(func=cmd_irr)

    cl = sub.add_parser("clean", help="cleanness verdicts at points")
    cl.add_argument("file")
    cl.add_argument("--point", action="append", default=[],
                    help="comma-separated coordinates, e.g. x=0,y=0")
    cl.add_argument("--json", action="store_true")
    cl.set_defaults(func=cmd_clean)

    z = sub.add_parser("zcar", help="log-characteristic cycle")
    z.add_argument("file")
    z.add_argument("--require-clean", action="store_true")
    z.add_argument("--json", action="store_true")
    z.set_defaults(func=cmd_zcar)

    ch = sub.add_parser("chi", help="de Rham Euler characteristic")
    ch.add_argument("file")
    ch.add_argument("--formula", choices=("kato", "ep", "kd"), default="kato")
    ch.add_argument("--require-clean", action="store_true")
    ch.add_argument("--json", action="store_true")
    ch.set_defaults(func=cmd_chi)

    nw = sub.add_parser("newton", help="Newton polygon of an operator")
    nw.add_argument("file")
    nw.add_argument("--json", action="store_true")
    nw.set_defaults(func=cmd_newton)

    orc = sub.add_parser("oracle", help="brute-force oracles")
    osub = orc.add_subparsers(dest="oracle_kind", required=True)
    oc = osub.add_parser("chi-curve", help="curve cohomology by linear algebra")
    oc.add_argument("file")
    oc.add_argument("--window", type=int, required=True)
    oc.add_argument("--json", action="store_true")
    oc.set_defaults(func=cmd_oracle_chi_curve)
    return p


def _load_model_doc(path):
    return parse_model_document(load_json(path))


def _emit(args, payload, lines):
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        for line in lines:
            print(line)


def cmd_validate(args) -> int:
    doc = _load_model_doc(args.file)
    if doc.model is None:
        raise SchemaError("validate needs a 'model' block")
    rep = validate_good_decomposition(doc.model)
    lines = [f"GOOD DECOMPOSITION: {'yes' if rep.is_good else 'no'}"]
    lines += rep.failures()
    payload = {
        "command": "validate",
        "good": rep.is_good,
        "summand_ok": list(rep.summand_ok),
        "pair_ok": [[i + 1, j + 1, ok] for i, j, ok in rep.pair_ok],
        "failures": rep.failures(),
    }
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_irr(args) -> int:
    doc = _load_model_doc(args.file)
    if doc.model is None:
        raise SchemaError("irr needs a 'model' block")
    div = irregularity_divisor(doc.model)
    lines = []
    payload_rows = []
    for k, (rank, row) in enumerate(div.rows, start=1):
        lines.append(f"summand {k}: rank={rank} b=({', '.join(str(b) for b in row)})")
        payload_rows.append({"rank": rank, "b": [str(b) for b in row]})
    per = {}
    for name, vals in zip(div.log_vars, div.per_divisor):
        lines.append(f"D({name}): sorted irregularities {', '.join(str(v) for v in vals)}")
        per[name] = [str(v) for v in vals]
    thetas = []
    for k, s in enumerate(doc.model.summands, start=1):
        if s.phi.is_zero:
            continue
        form = refined_form(s.phi, doc.model.chart)
        desc = ", ".join(str(t) for t in form.theta)
        lines.append(f"summand {k}: theta=({desc})")
        thetas.append({"summand": k, "theta": [str(t) for t in form.theta]})
    payload = {"command": "irr", "rows": payload_rows, "per_divisor": per,
               "theta": thetas}
    _emit(args, payload, lines)
    return EXIT_OK


def _parse_point_arg(text, chart):
    pt = {}
    for item in text.split(","):
        if "=" not in item:
            raise SchemaError(f"bad point coordinate {item!r}")
        name, val = item.split("=", 1)
        name = name.strip()
        if name not in chart.vars:
            raise SchemaError(f"unknown coordinate {name!r}")
        pt[name] = Fraction(val.strip())
    for name in chart.vars:
        if name not in pt:
            raise SchemaError(f"point misses coordinate {name}")
    return pt


def cmd_clean(args) -> int:
    doc = _load_model_doc(args.file)
    if doc.model is None:
        raise SchemaError("clean needs a 'model' block")
    points = [_parse_point_arg(t, doc.chart) for t in args.point]
    points.extend(doc.points)
    if not points:
        raise SchemaError("no points given: use --point or a 'points' block")
    lines = []
    results = []
    for pt in points:
        label = ",".join(f"{k}={pt[k]}" for k in doc.chart.vars)
        ok, cert = clean_at_point(doc.model, pt)
        num = numerically_clean_at_point(doc.model, pt)
        lines.append(f"at ({label}): clean: {'yes' if ok else 'no'}, "
                     f"numerically clean: {'yes' if num else 'no'}")
        if not ok:
            lines.append(f"  reason: {cert.reason}")
        results.append({"point": {k: str(pt[k]) for k in doc.chart.vars},
                        "clean": ok, "numerically_clean": num,
                        "reason": cert.reason})
    _emit(args, {"command": "clean", "results": results}, lines)
    return EXIT_OK


def _certified_clean(model):
    """Chart-level cleanness from the non-clean locus (dimension <= 2).

    Higher-dimensional charts only get ideal generators from the locus, so
    cleanness is never certified there and cycles stay labeled conjectural.
    """
    if model.chart.n > 2:
        return False, None
    try:
        locus = nonclean_locus(model)
    except CodimensionError:
        return False, None
    return locus.is_empty, locus


def cmd_zcar(args) -> int:
    doc = _load_model_doc(args.file)
    lines = []
    if doc.monomial_module is not None:
        cycle = monomial_char_cycle(doc.monomial_module)
        dim = hilbert_dim(doc.monomial_module)
        lines.append(f"hilbert dimension: {dim}")
        lines.extend(cycle.report_lines())
        payload = {"command": "zcar", "kind": "monomial", "hilbert_dim": dim,
                   "components": cycle.report_lines()}
        _emit(args, payload, lines)
        return EXIT_OK
    clean, _ = _certified_clean(doc.model)
    if args.require_clean and not clean:
        _fail("model is not clean on the chart; refusing under --require-clean")
        return EXIT_NOT_CLEAN
    cycle = zcar_prime(doc.model)
    status = "log-characteristic cycle" if clean else \
        "conjectural log-characteristic cycle (cleanness not certified)"
    lines.append(status)
    lines.extend(cycle.report_lines())
    payload = {"command": "zcar", "kind": "model", "clean": clean,
               "components": cycle.report_lines()}
    _emit(args, payload, lines)
    return EXIT_OK


def _expanded_rows(model):
    div = irregularity_divisor(model)
    return [(rank, row) for rank, row in div.rows]


def cmd_chi(args) -> int:
    doc = _load_model_doc(args.file)
    if doc.geometry is None:
        raise SchemaError("chi needs a 'geometry' block")
    if doc.model is None:
        raise SchemaError("chi needs a 'model' block")
    geom = doc.geometry
    clean, _ = _certified_clean(doc.model)
    if args.require_clean and not clean:
        _fail("model is not clean on the chart; refusing under --require-clean")
        return EXIT_NOT_CLEAN
    rows = _expanded_rows(doc.model)
    if args.formula == "kato":
        if isinstance(geom, Curve):
            value = chi_curve(doc.model.rank, _curve_with_model_divisor(doc.model, geom))
            provenance = "curve formula: rank*chi(U) - total irregularity"
        else:
            value = chi_surface_kato(rows, _surface_for_chart(doc.model, geom))
            provenance = "surface formula with per-row irregularity divisors"
    elif args.formula == "ep":
        if isinstance(geom, Curve):
            value = chi_EP(_curve_rows(doc.model, geom), geom)
        else:
            value = chi_EP(rows, _surface_for_chart(doc.model, geom), doc.chern)
        provenance = "Chern-class evaluation, degree-n truncation with (-1)^n"
    else:
        cycle = zcar_prime(doc.model)
        if isinstance(geom, Curve):
            # off-chart punctures enter through their declared totals
            other = _other_puncture_total(doc.model, geom)
            value = kashiwara_dubson(cycle, geom, doc.chern) - other
        else:
            value = kashiwara_dubson(cycle, _surface_for_chart(doc.model, geom),
                                     doc.chern)
        provenance = "intersection of the zero section with the cycle, times (-1)^n"
        if not clean:
            provenance += " [cycle is conjectural: cleanness not certified]"
    lines = [f"chi = {value}", f"provenance: {provenance}"]
    payload = {"command": "chi", "chi": value, "formula": args.formula,
               "provenance": provenance, "clean": clean}
    _emit(args, payload, lines)
    return EXIT_OK


def _chart_puncture_index(model, geom: Curve) -> int:
    chart_div = model.chart.log_vars[0]
    for j, (name, _) in enumerate(geom.punctures):
        if name == chart_div:
            return j
    raise SchemaError(f"geometry lists no puncture named {chart_div!r}")


def _curve_with_model_divisor(model, geom: Curve) -> Curve:
    """Substitute the computed irregularities at the chart's own puncture.

    A nonempty multiset supplied at the chart puncture must agree with the
    model; other punctures keep their declared multisets.
    """
    div = irregularity_divisor(model)
    col = _chart_puncture_index(model, geom)
    computed = div.per_divisor[0]
    punctures = []
    for j, (name, irrs) in enumerate(geom.punctures):
        if j == col:
            if irrs and tuple(sorted(irrs, reverse=True)) != computed:
                raise GeometryError(
                    f"declared irregularities at {name} disagree with the model")
            punctures.append((name, computed))
        else:
            punctures.append((name, irrs))
    return Curve(geom.genus, tuple(punctures))


def _other_puncture_total(model, geom: Curve) -> int:
    col = _chart_puncture_index(model, geom)
    total = Fraction(0)
    for j, (_, irrs) in enumerate(geom.punctures):
        if j != col:
            total += sum(Fraction(v) for v in irrs)
    if total.denominator != 1:
        raise IntegralityError(f"non-integral off-chart irregularity total {total}")
    return total.numerator


def _curve_rows(model, geom: Curve):
    """Rank-expanded irregularity rows over every puncture of the curve.

    The chart column comes from the model; declared multisets at the other
    punctures are distributed over the rows in sorted order (any
    distribution yields the same Euler characteristic).
    """
    geom = _curve_with_model_divisor(model, geom)
    k = len(geom.punctures)
    d = model.rank
    cols = []
    for name, irrs in geom.punctures:
        vals = sorted((Fraction(v) for v in irrs), reverse=True)
        if len(vals) > d:
            raise GeometryError(f"more irregularities than the rank at {name}")
        vals += [Fraction(0)] * (d - len(vals))
        cols.append(vals)
    return [(1, tuple(cols[j][i] for j in range(k))) for i in range(d)]


def _surface_for_chart(model, geom: Surface) -> Surface:
    """Match geometry components to chart log divisors positionally."""
    if len(geom.components) != model.chart.m:
        raise SchemaError(
            "surface needs one component per chart log divisor "
            f"({len(geom.components)} vs {model.chart.m})")
    comps = tuple((name, chi) for name, (_, chi)
                  in zip(model.chart.log_vars, geom.components))
    return Surface(geom.chi_U, comps, geom.intersections)


def cmd_newton(args) -> int:
    op = parse_operator_document(load_json(args.file))
    poly = newton_polygon(op)
    lines = [f"order: {poly.order}",
             "vertices: " + " ".join(f"({i},{v})" for i, v in poly.vertices),
             "slopes: " + ("; ".join(f"{s} (width {w})" for s, w in poly.slopes)
                           or "none"),
             "irregularities: " + ", ".join(
                 f"{v} (x{m})" for v, m in poly.irregularities),
             f"total irregularity: {poly.total_irregularity}"]
    refined_payload = []
    for v, m in poly.irregularities:
        if v <= 0:
            continue
        try:
            ref = refined_residue(op, v)
        except FactorizationError as exc:
            lines.append(f"slope {v}: residue factorization unavailable ({exc})")
            continue
        qstr = _poly_repr(ref.residue_poly)
        lines.append(f"slope {v}: residue q(X) = {qstr} over cover t^(1/{ref.kummer})")
        for orb in ref.orbits:
            lines.append(f"  {orb.describe()}")
        bad = orbit_integrality_violations(ref)
        for orb, val in bad:
            lines.append(f"  INTEGRALITY VIOLATION: dim*slope/r = {val}")
        refined_payload.append({"slope": str(v), "q": [str(c) for c in ref.residue_poly],
                                "kummer": ref.kummer,
                                "orbits": [orb.describe() for orb in ref.orbits],
                                "violations": [str(val) for _, val in bad]})
        if bad:
            _fail("orbit integrality violated")
            _emit(args, {}, lines)
            return EXIT_ASSERTION
    payload = {"command": "newton",
               "vertices": [[i, str(v)] for i, v in poly.vertices],
               "irregularities": [[str(v), m] for v, m in poly.irregularities],
               "total": str(poly.total_irregularity),
               "refined": refined_payload}
    _emit(args, payload, lines)
    return EXIT_OK


def _poly_repr(coeffs):
    from .cdvf import _poly_str
    return _poly_str(coeffs)


def cmd_oracle_chi_curve(args) -> int:
    doc = _load_model_doc(args.file)
    if doc.model is None:
        raise SchemaError("the oracle needs a 'model' block")
    if doc.chart.n != 1 or len(doc.model.summands) != 1 \
            or doc.model.summands[0].rank != 1:
        raise SchemaError("the oracle handles one-variable rank-1 twists")
    phi = doc.model.summands[0].phi
    cert = derham_oracle_curve(phi, args.window)
    lines = [f"oracle = {cert.chi}",
             f"kernel: {cert.kernel_dim}, cokernel: {cert.cokernel_dim}",
             f"window: {cert.window} (stable against {cert.recheck_window})"]
    payload = {"command": "oracle", "oracle": "chi-curve", "chi": cert.chi,
               "kernel": cert.kernel_dim, "cokernel": cert.cokernel_dim,
               "window": cert.window, "recheck_window": cert.recheck_window}
    _emit(args, payload, lines)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
