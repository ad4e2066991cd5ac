"""JSON model documents: parsing, validation, serialization.

Schema version 1.  Coefficients are exact rational strings "p/q"; exponents
are integers or rational strings, whose denominators are absorbed into the
Kummer cover denominators of the log variables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Tuple

from .cycles import MonomialLogModule
from .cdvf import DiffOperator, GAUGE_LOG, GAUGE_PARTIAL
from .euler import ChernData, Curve, Surface
from .field import QQ, NumberField, parse_rational
from .goodmodel import Chart, GoodModel, ModelSummand
from .laurent import LaurentPolynomial
from .series import LaurentSeries

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class ModelDocument:
    field: NumberField
    chart: Chart
    model: Optional[GoodModel]
    monomial_module: Optional[MonomialLogModule]
    geometry: object
    chern: Optional[ChernData]
    points: Tuple[dict, ...]
    raw: dict

    def to_json_dict(self) -> dict:
        return _canonical(self.raw)


def _canonical(obj):
    if isinstance(obj, dict):
        return {k: _canonical(obj[k]) for k in sorted(obj)}
    if isinstance(obj, list):
        return [_canonical(x) for x in obj]
    return obj


def _expect(cond, msg):
    if not cond:
        raise SchemaError(msg)


def parse_model_document(doc: dict) -> ModelDocument:
    _expect(isinstance(doc, dict), "document must be a JSON object")
    _expect(doc.get("schema") == SCHEMA_VERSION,
            f"schema must be {SCHEMA_VERSION}")
    field = _parse_field(doc.get("field", {"base": "Q"}))
    chart = _parse_chart(doc.get("chart"))
    model = None
    monomial = None
    if "model" in doc:
        model = _parse_model(doc["model"], doc.get("kummer"), chart, field)
    if "monomial_module" in doc:
        monomial = _parse_monomial_module(doc["monomial_module"], chart)
    _expect(model is not None or monomial is not None,
            "document needs a 'model' or a 'monomial_module' block")
    geometry = _parse_geometry(doc.get("geometry"))
    chern = _parse_chern(doc.get("chern"), geometry)
    points = tuple(_parse_point(p, chart) for p in doc.get("points", []))
    return ModelDocument(field, chart, model, monomial, geometry, chern, points, doc)


def _parse_field(spec) -> NumberField:
    _expect(isinstance(spec, dict), "field must be an object")
    base = spec.get("base", "Q")
    if base == "Q":
        return QQ
    if base == "number_field":
        modulus = spec.get("modulus")
        _expect(isinstance(modulus, list) and len(modulus) >= 2,
                "number_field needs an ascending modulus list")
        return NumberField([parse_rational(c) for c in modulus],
                           spec.get("gen", "a"))
    raise SchemaError(f"unknown base field {base!r}")


def _parse_chart(spec) -> Chart:
    _expect(isinstance(spec, dict), "chart must be an object")
    vars = spec.get("vars")
    log_vars = spec.get("log_vars")
    _expect(isinstance(vars, list) and vars and all(isinstance(v, str) for v in vars),
            "chart.vars must be a nonempty list of names")
    _expect(isinstance(log_vars, list) and log_vars, "chart.log_vars must be nonempty")
    try:
        return Chart(tuple(vars), tuple(log_vars))
    except Exception as exc:
        raise SchemaError(f"bad chart: {exc}")


def _parse_model(spec, kummer_spec, chart: Chart, field) -> GoodModel:
    _expect(isinstance(spec, list) and spec, "model must be a nonempty list of summands")
    n = chart.n
    raw_terms = []
    denominators = [1] * n
    for k, summand in enumerate(spec):
        _expect(isinstance(summand, dict), f"summand {k} must be an object")
        phi = summand.get("phi", [])
        _expect(isinstance(phi, list), f"summand {k}: phi must be a list of terms")
        terms = []
        for t in phi:
            _expect(isinstance(t, dict) and "exp" in t and "coeff" in t,
                    f"summand {k}: each term needs 'coeff' and 'exp'")
            exp = t["exp"]
            _expect(isinstance(exp, list) and len(exp) == n,
                    f"summand {k}: exponent arity must be {n}")
            fexp = [Fraction(str(e)) for e in exp]
            for j, e in enumerate(fexp):
                if e.denominator > 1:
                    _expect(j in chart.log_indices,
                            f"summand {k}: fractional exponent on non-log variable")
                    denominators[j] = lcm(denominators[j], e.denominator)
            terms.append((fexp, parse_rational(t["coeff"])))
        rank = summand.get("rank", 1)
        _expect(isinstance(rank, int) and rank >= 1, f"summand {k}: rank must be >= 1")
        raw_terms.append((terms, rank))
    hs = [1] * chart.m
    if kummer_spec is not None:
        _expect(isinstance(kummer_spec, list) and len(kummer_spec) == chart.m
                and all(isinstance(h, int) and h >= 1 for h in kummer_spec),
                "kummer must list one positive integer per log divisor")
        hs = list(kummer_spec)
    for i, j in enumerate(chart.log_indices):
        hs[i] = lcm(hs[i], denominators[j])
    cover = [1] * n
    for i, j in enumerate(chart.log_indices):
        cover[j] = hs[i]
    summands = []
    for terms, rank in raw_terms:
        tdict = {}
        for fexp, coeff in terms:
            e = []
            for j, x in enumerate(fexp):
                scaled = x * cover[j]
                _expect(scaled.denominator == 1, "internal: cover does not clear exponent")
                e.append(int(scaled))
            key = tuple(e)
            tdict[key] = tdict.get(key, Fraction(0)) + coeff
        summands.append(ModelSummand(LaurentPolynomial(chart.vars, tdict, field), rank))
    try:
        return GoodModel(chart, summands, hs, field)
    except Exception as exc:
        raise SchemaError(f"bad model: {exc}")


def _parse_monomial_module(spec, chart: Chart) -> MonomialLogModule:
    _expect(isinstance(spec, dict), "monomial_module must be an object")
    gens = spec.get("generators")
    _expect(isinstance(gens, list) and gens, "monomial_module needs generators")
    degrees = []
    for g in gens:
        _expect(isinstance(g, dict) and isinstance(g.get("degree", 0), int),
                "each generator carries an integer degree")
        degrees.append(g.get("degree", 0))
    rels = []
    for r in spec.get("relations", []):
        _expect(isinstance(r, dict), "relations must be objects")
        gen = r.get("gen", 0)
        x_exp = r.get("x_exp")
        xi_exp = r.get("xi_exp")
        _expect(isinstance(gen, int) and 0 <= gen < len(degrees), "relation gen index")
        n = chart.n
        _expect(isinstance(x_exp, list) and len(x_exp) == n
                and all(isinstance(a, int) and a >= 0 for a in x_exp),
                f"relation x_exp must be {n} nonnegative integers")
        _expect(isinstance(xi_exp, list) and len(xi_exp) == n
                and all(isinstance(a, int) and a >= 0 for a in xi_exp),
                f"relation xi_exp must be {n} nonnegative integers")
        rels.append((gen, tuple(x_exp), tuple(xi_exp)))
    try:
        return MonomialLogModule(chart.stamp(), tuple(degrees), tuple(rels))
    except Exception as exc:
        raise SchemaError(f"bad monomial module: {exc}")


def _parse_geometry(spec):
    if spec is None:
        return None
    _expect(isinstance(spec, dict), "geometry must be an object")
    kind = spec.get("kind")
    if kind == "curve":
        genus = spec.get("genus", 0)
        _expect(isinstance(genus, int) and genus >= 0, "genus must be a natural number")
        punctures = []
        for p in spec.get("punctures", []):
            _expect(isinstance(p, dict) and "name" in p, "puncture needs a name")
            irrs = tuple(Fraction(str(v)) for v in p.get("irregularities", []))
            punctures.append((str(p["name"]), irrs))
        return Curve(genus, tuple(punctures))
    if kind == "surface":
        chi_U = spec.get("chi_U")
        _expect(isinstance(chi_U, int), "surface needs integral chi_U")
        comps = []
        for c in spec.get("components", []):
            _expect(isinstance(c, dict) and "name" in c and isinstance(
                c.get("chi_open"), int), "component needs name and integral chi_open")
            comps.append((str(c["name"]), c["chi_open"]))
        inter = spec.get("intersections")
        _expect(isinstance(inter, list), "surface needs an intersection matrix")
        try:
            return Surface(chi_U, tuple(comps), tuple(tuple(r) for r in inter))
        except Exception as exc:
            raise SchemaError(f"bad surface geometry: {exc}")
    raise SchemaError(f"unknown geometry kind {kind!r}")


def _parse_chern(spec, geometry):
    if spec is None:
        return None
    _expect(isinstance(spec, dict), "chern must be an object")
    _expect(geometry is not None and geometry.n == 2,
            "chern data applies to surface geometry")
    c2 = parse_rational(spec.get("c2"))
    c1 = spec.get("c1_dot_D")
    _expect(isinstance(c1, list) and len(c1) == len(geometry.components),
            "c1_dot_D must list one value per divisor component")
    return ChernData(c2, tuple(parse_rational(v) for v in c1), False)


def _parse_point(spec, chart: Chart):
    _expect(isinstance(spec, dict), "each point must be an object")
    pt = {}
    for name in chart.vars:
        _expect(name in spec, f"point misses coordinate {name}")
        pt[name] = parse_rational(str(spec[name]))
    return pt


# -- operator documents --------------------------------------------------------


def parse_operator_document(doc: dict) -> DiffOperator:
    _expect(isinstance(doc, dict), "operator document must be a JSON object")
    _expect(doc.get("schema", SCHEMA_VERSION) == SCHEMA_VERSION, "schema must be 1")
    gauge = doc.get("gauge", GAUGE_PARTIAL)
    _expect(gauge in (GAUGE_PARTIAL, GAUGE_LOG), f"unknown gauge {gauge!r}")
    order = doc.get("order")
    coeffs_spec = doc.get("coeffs")
    _expect(isinstance(order, int) and order >= 1, "order must be a positive integer")
    _expect(isinstance(coeffs_spec, list) and len(coeffs_spec) == order,
            "coeffs must list one term-list per coefficient c_1..c_d")
    coeffs = []
    for k, spec in enumerate(coeffs_spec, start=1):
        _expect(isinstance(spec, list), f"coefficient {k} must be a list of [exp, value]")
        terms = {}
        for t in spec:
            _expect(isinstance(t, list) and len(t) == 2 and isinstance(t[0], int),
                    f"coefficient {k}: each term is [int exponent, rational string]")
            terms[t[0]] = terms.get(t[0], Fraction(0)) + parse_rational(str(t[1]))
        coeffs.append(LaurentSeries("t", terms))
    return DiffOperator(gauge, coeffs)


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}")
