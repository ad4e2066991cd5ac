"""Good-decomposition models on a normal-crossings chart.

A model is a direct sum of rank-1 twists attached to Laurent polynomials
phi_alpha tensored with regular pieces that enter only through their rank.
Exponents are integral on a Kummer cover x_j -> x_j^{1/h_j} of the log
variables; all reported pole orders are base-normalized rationals.

Cleanness at a point z is decided through condition-style data: linearity of
the sharp radius functions on the divisors through z, together with
nonvanishing of the reduced twisted differential (the theta vector) at z.
Numerical cleanness asks for full-octant linearity of every sorted radius
function in all local coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .cycles import (ChartStamp, CycleError, Direction, DivisorLine,
                     IntegralityError, LogCycle, ZeroSection)
from .field import QQ, NumberField, Scalar
from .laurent import LaurentPolynomial, monomial_times_unit
from .tropical import RadiusProfile, TropicalFn, sorted_profile_linear


class ModelError(ValueError):
    pass


class PointError(ValueError):
    pass


class CodimensionError(AssertionError):
    pass


@dataclass(frozen=True)
class Chart:
    vars: Tuple[str, ...]
    log_vars: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars):
            raise ModelError("chart variables must be distinct")
        if not self.log_vars:
            raise ModelError("a chart needs at least one log divisor")
        if not set(self.log_vars) <= set(self.vars):
            raise ModelError("log variables must be chart variables")

    @property
    def n(self):
        return len(self.vars)

    @property
    def m(self):
        return len(self.log_vars)

    @property
    def log_indices(self):
        return tuple(self.vars.index(v) for v in self.log_vars)

    def stamp(self) -> ChartStamp:
        return ChartStamp(self.vars, self.log_vars)


@dataclass(frozen=True)
class ModelSummand:
    phi: LaurentPolynomial
    rank: int = 1

    def __post_init__(self):
        if self.rank < 1:
            raise ModelError("summand rank must be positive")


class GoodModel:
    __slots__ = ("chart", "summands", "kummer", "field")

    def __init__(self, chart: Chart, summands: Sequence[ModelSummand],
                 kummer: Optional[Sequence[int]] = None, field: NumberField = QQ):
        if not summands:
            raise ModelError("model needs at least one summand")
        ks = tuple(int(h) for h in (kummer if kummer is not None else (1,) * chart.m))
        if len(ks) != chart.m or any(h < 1 for h in ks):
            raise ModelError("one positive Kummer denominator per log divisor required")
        log = set(chart.log_indices)
        for s in summands:
            if s.phi.vars != chart.vars:
                raise ModelError("summand variables must match the chart")
            for e in s.phi.terms:
                for j, a in enumerate(e):
                    if a < 0 and j not in log:
                        raise ModelError("negative exponent on a non-log variable")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "summands", tuple(summands))
        object.__setattr__(self, "kummer", ks)
        object.__setattr__(self, "field", field)

    def __setattr__(self, *a):
        raise AttributeError("GoodModel is immutable")

    @property
    def rank(self):
        return sum(s.rank for s in self.summands)

    def kummer_for_var(self) -> Tuple[int, ...]:
        """Per chart variable: cover degree (1 for non-log variables)."""
        out = [1] * self.chart.n
        for name, h in zip(self.chart.log_vars, self.kummer):
            out[self.chart.vars.index(name)] = h
        return tuple(out)

    def cover_pole_vector(self, s: ModelSummand) -> Tuple[int, ...]:
        """Pole order of phi along each log divisor in cover coordinates."""
        out = []
        for j in self.chart.log_indices:
            mn = s.phi.min_exponent(j)
            out.append(max(0, -(mn if mn is not None else 0)))
        return tuple(out)

    def base_pole_vector(self, s: ModelSummand) -> Tuple[Fraction, ...]:
        return tuple(Fraction(p, h) for p, h in zip(self.cover_pole_vector(s), self.kummer))


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class GoodDecompositionReport:
    summand_ok: Tuple[bool, ...]
    pair_ok: Tuple[Tuple[int, int, bool], ...]
    is_good: bool

    def failures(self):
        out = []
        for i, ok in enumerate(self.summand_ok):
            if not ok:
                out.append(f"condition (1) fails for summand {i + 1}")
        for i, j, ok in self.pair_ok:
            if not ok:
                out.append(f"condition (2) fails for pair ({i + 1}, {j + 1})")
        return out


def _condition_monomial_unit(phi: LaurentPolynomial, log_indices) -> bool:
    if phi.is_zero:
        return True
    if all(a >= 0 for e in phi.terms for a in e):
        return True  # already a power series
    return monomial_times_unit(phi, log_indices) is not None


def validate_good_decomposition(model: GoodModel) -> GoodDecompositionReport:
    """Check the two good-decomposition conditions on summands and differences."""
    log = model.chart.log_indices
    summand_ok = tuple(_condition_monomial_unit(s.phi, log) for s in model.summands)
    pairs = []
    for i, j in itertools.combinations(range(len(model.summands)), 2):
        diff = model.summands[i].phi - model.summands[j].phi
        pairs.append((i, j, _condition_monomial_unit(diff, log)))
    good = all(summand_ok) and all(ok for _, _, ok in pairs)
    return GoodDecompositionReport(summand_ok, tuple(pairs), good)


# -- irregularity divisors ----------------------------------------------------


@dataclass(frozen=True)
class IrregularityDivisor:
    log_vars: Tuple[str, ...]
    rows: Tuple[Tuple[int, Tuple[Fraction, ...]], ...]  # (rank, b-vector) per summand
    per_divisor: Tuple[Tuple[Fraction, ...], ...]       # sorted descending, per divisor

    def expanded_rows(self):
        out = []
        for rank, row in self.rows:
            out.extend([row] * rank)
        return tuple(out)

    def display_rows(self):
        return tuple(sorted(self.expanded_rows(), reverse=True))


def irregularity_divisor(model: GoodModel) -> IrregularityDivisor:
    rows = tuple((s.rank, model.base_pole_vector(s)) for s in model.summands)
    per = []
    for j in range(model.chart.m):
        vals = []
        for rank, row in rows:
            vals.extend([row[j]] * rank)
        per.append(tuple(sorted(vals, reverse=True)))
    return IrregularityDivisor(model.chart.log_vars, rows, tuple(per))


# -- refined forms -------------------------------------------------------------


@dataclass(frozen=True)
class RefinedForm:
    """Coefficients of the twisted differential in the log basis.

    theta_l is t * (x_l d_l phi) for log variables and t * (d_l phi)
    otherwise, with t the product of x_j^{pole order} over the log divisors;
    everything lives in cover coordinates.
    """
    theta: Tuple[LaurentPolynomial, ...]
    twist: Tuple[int, ...]  # cover pole orders per log divisor

    def reduced_at(self, point: Mapping[str, object]):
        return tuple(t.evaluate(point) for t in self.theta)


def refined_form(phi: LaurentPolynomial, chart: Chart) -> RefinedForm:
    if phi.is_zero:
        raise ModelError("refined form of the zero polynomial")
    log = set(chart.log_indices)
    pole = []
    exp = [0] * chart.n
    for j in chart.log_indices:
        mn = phi.min_exponent(j)
        p = max(0, -(mn if mn is not None else 0))
        pole.append(p)
        exp[j] = p
    tw = LaurentPolynomial.monomial(chart.vars, exp, 1, phi.field)
    theta = []
    for l in range(chart.n):
        d = phi.log_partial(l) if l in log else phi.partial(l)
        theta.append(tw * d)
    return RefinedForm(tuple(theta), tuple(pole))


# -- local analysis at a point --------------------------------------------------


def _normalize_point(model: GoodModel, z: Mapping[str, object]) -> Dict[str, Scalar]:
    pt = {}
    for name in model.chart.vars:
        if name not in z:
            raise PointError(f"missing coordinate {name}")
        v = z[name]
        pt[name] = v if isinstance(v, Scalar) else model.field(v)
    return pt


def _local_frame(model: GoodModel, z: Mapping[str, Scalar]):
    """Split coordinates at z: divisors through z, recentred, kept."""
    chart = model.chart
    log = set(chart.log_indices)
    J, R, K = [], [], []
    for j, name in enumerate(chart.vars):
        if z[name].is_zero:
            (J if j in log else K).append(j)
        else:
            R.append(j)
    if not J:
        raise PointError("point does not lie on the log divisor")
    kv = model.kummer_for_var()
    for j in R:
        if kv[j] != 1:
            raise ModelError("recentring through a Kummer cover is not supported; "
                             "evaluate at points on the covered divisors")
    return J, R, K


def local_support(phi: LaurentPolynomial, model: GoodModel,
                  z: Mapping[str, Scalar]) -> Tuple[Tuple[int, ...], ...]:
    """Support of phi recentred at z, up to unit saturation.

    Coordinates with nonzero value are shifted exactly; negative powers of
    shifted variables are units there and only saturate the support upward,
    which never changes the attached max-plus function.
    """
    J, R, K = _local_frame(model, z)
    chart = model.chart
    groups: Dict[Tuple[int, ...], Dict[Tuple[int, ...], Scalar]] = {}
    for e, c in phi.terms.items():
        key = tuple(e[j] for j in J + K)
        rpart = tuple(e[j] for j in R)
        g = groups.setdefault(key, {})
        g[rpart] = g.get(rpart, model.field.zero()) + c
    out = set()
    for key, rterms in groups.items():
        shifted = _recenter_support(rterms, [chart.vars[j] for j in R],
                                    [z[chart.vars[j]] for j in R], model.field)
        for s in shifted:
            e = [0] * chart.n
            for pos, j in enumerate(J + K):
                e[j] = key[pos]
            for pos, j in enumerate(R):
                e[j] = s[pos]
            out.add(tuple(e))
    return tuple(sorted(out))


def _recenter_support(rterms, names, values, field):
    """Support of (sum of R-monomials) shifted by the point values.

    Poles are pulled out as a single monomial whose shift is a unit; the
    polynomial part is shifted exactly.
    """
    if not names:
        return {()} if any(not c.is_zero for c in rterms.values()) else set()
    poly = LaurentPolynomial(tuple(names), dict(rterms), field)
    if poly.is_zero:
        return set()
    pullout = [max(0, -(poly.min_exponent(j) or 0)) for j in range(len(names))]
    shifted = poly * LaurentPolynomial.monomial(tuple(names), pullout, 1, field)
    for j, v in enumerate(values):
        shifted = shifted.shift_variable(j, v)
    return set(shifted.terms.keys())


def _local_tropical(model: GoodModel, s: ModelSummand, z, mode: str):
    """Radius function of a summand in the local coordinates at z."""
    J, R, K = _local_frame(model, z)
    order = J + R + K  # local octant: divisors through z first
    kv = model.kummer_for_var()
    supp = local_support(s.phi, model, z)
    forms = []
    for e in supp:
        forms.append(tuple(Fraction(-e[j], kv[j]) for j in order))
    n = model.chart.n
    nlog = len(J)
    return TropicalFn(n, forms, mode=mode, nlog=nlog)


@dataclass(frozen=True)
class CleanCertificate:
    clean: bool
    sharp_linear: Tuple[bool, ...]
    theta_reductions: Tuple[Tuple[int, Tuple[str, ...]], ...]
    reason: str


def numerically_clean_at_point(model: GoodModel, z: Mapping[str, object]) -> bool:
    """Full-octant linearity of every sorted radius function at z."""
    pt = _normalize_point(model, z)
    profile = RadiusProfile([(_local_tropical(model, s, pt, "full"), s.rank)
                             for s in model.summands])
    ok, _ = sorted_profile_linear(profile)
    return ok


def clean_at_point(model: GoodModel, z: Mapping[str, object]):
    """Cleanness at z: sharp linearity plus nonvanishing reduced theta.

    Returns (bool, CleanCertificate).
    """
    pt = _normalize_point(model, z)
    J, R, K = _local_frame(model, pt)
    profile = RadiusProfile([(_local_tropical(model, s, pt, "sharp"), s.rank)
                             for s in model.summands])
    ok, verdicts = sorted_profile_linear(profile)
    thetas = []
    theta_ok = True
    chart = model.chart
    for idx, s in enumerate(model.summands):
        pole = {chart.log_indices[k]: p
                for k, p in enumerate(model.cover_pole_vector(s))}
        if not any(pole[j] for j in J if j in pole):
            continue  # no pole through z: nothing to reduce
        exp = [0] * chart.n
        for j in J:
            exp[j] = pole.get(j, 0)
        tw = LaurentPolynomial.monomial(chart.vars, exp, 1, s.phi.field)
        vals = []
        nonzero = False
        for l in range(chart.n):
            d = s.phi.log_partial(l) if l in J else s.phi.partial(l)
            v = (tw * d).evaluate(pt)
            vals.append(str(v))
            nonzero = nonzero or not v.is_zero
        thetas.append((idx, tuple(vals)))
        theta_ok = theta_ok and nonzero
    clean = ok and theta_ok
    if clean:
        reason = "sharp radius functions linear; reduced twisted differentials nonzero"
    elif not ok:
        reason = "a sorted sharp radius function is not linear at the point"
    else:
        reason = "a reduced twisted differential vanishes at the point"
    return clean, CleanCertificate(clean, verdicts, tuple(thetas), reason)


# -- non-clean locus ------------------------------------------------------------


@dataclass(frozen=True)
class DivisorLocus:
    divisor: str
    generators: Tuple[str, ...]
    points: Tuple[str, ...]


@dataclass(frozen=True)
class NonCleanLocus:
    per_divisor: Tuple[DivisorLocus, ...]
    bad_strata: Tuple[str, ...]
    codimension_ok: bool

    @property
    def is_empty(self):
        return all(not d.points for d in self.per_divisor) and not self.bad_strata


def nonclean_locus(model: GoodModel) -> NonCleanLocus:
    """Vanishing loci of reduced theta vectors plus failing crossing strata.

    For charts of dimension <= 2 the locus is enumerated pointwise; the
    codimension >= 2 assertion fails when a theta vector vanishes along a
    whole divisor.
    """
    chart = model.chart
    per = []
    for k, name in enumerate(chart.log_vars):
        j = chart.vars.index(name)
        gens = []
        for s in model.summands:
            p = model.cover_pole_vector(s)[k]
            if p == 0:
                continue
            exp = [0] * chart.n
            exp[j] = p
            tw = LaurentPolynomial.monomial(chart.vars, exp, 1, s.phi.field)
            entries = []
            for l in range(chart.n):
                d = s.phi.log_partial(l) if l in chart.log_indices else s.phi.partial(l)
                entries.append((tw * d).restrict_to_zero(j))
            if all(en.is_zero for en in entries):
                raise CodimensionError(
                    f"theta vector of a summand vanishes along D({name})")
            gens.append(entries)
        points = []
        if chart.n == 2 and gens:
            other = 1 - j
            points = _common_zeros_on_divisor(gens, other, chart, model.field)
        per.append(DivisorLocus(name, tuple(
            ", ".join(str(e) for e in entry) for entry in gens), tuple(points)))
    bad = []
    if chart.n == 2 and chart.m == 2:
        origin = {v: 0 for v in chart.vars}
        ok, _ = clean_at_point(model, origin)
        if not ok:
            bad.append("origin")
    if chart.n == 1:
        # a curve point is codimension 1: any failure would violate the bound
        origin = {chart.vars[0]: 0}
        ok, _ = clean_at_point(model, origin)
        if not ok:
            raise CodimensionError("non-clean point on a curve chart")
    return NonCleanLocus(tuple(per), tuple(bad), True)


def _common_zeros_on_divisor(gens, other_index, chart, field):
    """Rational common zeros of all theta entries of some summand on D_j."""
    points = []
    for entries in gens:
        # univariate Laurent polynomials in the other variable; clear poles
        polys = []
        for en in entries:
            if en.is_zero:
                continue
            shift = max(0, -(en.min_exponent(other_index) or 0))
            e = [0] * chart.n
            e[other_index] = shift
            polys.append(en * LaurentPolynomial.monomial(chart.vars, e, 1, field))
        if not polys:
            continue
        roots = None
        for p in polys:
            rs = set(_univariate_rational_roots(p, other_index))
            roots = rs if roots is None else roots & rs
            if not roots:
                break
        for r in sorted(roots or ()):
            if r == 0 and other_index in chart.log_indices:
                continue  # crossing point, handled as a stratum
            points.append(f"{chart.vars[other_index]}={r}")
    return sorted(set(points))


def _univariate_rational_roots(p: LaurentPolynomial, j: int):
    from .field import _rational_roots
    deg = max(e[j] for e in p.terms)
    coeffs = [Fraction(0)] * (deg + 1)
    for e, c in p.terms.items():
        if not c.is_rational_value():
            return []
        coeffs[e[j]] += c.rational_value()
    return _rational_roots(coeffs)


# -- conjectural cycle ----------------------------------------------------------


def zcar_prime(model: GoodModel) -> LogCycle:
    """Zero section plus irregularity-weighted refined-direction lines.

    Fractional pole orders must clear against the summand rank; the
    orbit-normalized multiplicity rank * b_j is asserted integral.
    """
    chart = model.chart
    stamp = chart.stamp()
    parts = [(ZeroSection(), Fraction(model.rank))]
    for s in model.summands:
        row = model.base_pole_vector(s)
        if not any(row):
            continue  # regular summand: zero-section contribution only
        form = refined_form(s.phi, chart)
        for k, name in enumerate(chart.log_vars):
            b = row[k]
            if b == 0:
                continue
            j = chart.vars.index(name)
            entries = [t.restrict_to_zero(j) for t in form.theta]
            if entries[j].is_zero:
                raise CycleError(
                    f"leading refined coefficient of D({name}) vanishes")
            mult = Fraction(s.rank) * b
            if mult.denominator != 1:
                raise IntegralityError(
                    f"non-integral line multiplicity {mult} over D({name}): "
                    "rank does not clear the orbit normalization")
            parts.append((DivisorLine(name, Direction(entries), 1, row), mult))
    return LogCycle(stamp, parts).finalize()


def model_kummer_pullback(model: GoodModel, h: Mapping[str, int]) -> GoodModel:
    """Pull the model back along x_j -> x_j^{h_j} on the log variables."""
    chart = model.chart
    factors = [1] * chart.n
    for name, hj in h.items():
        if name not in chart.log_vars:
            raise ModelError(f"{name} is not a log variable")
        factors[chart.vars.index(name)] = int(hj)
    summands = [ModelSummand(s.phi.scale_exponents(factors), s.rank)
                for s in model.summands]
    return GoodModel(chart, summands, model.kummer, model.field)


def kedlaya_criterion(model: GoodModel):
    """Good-formal-structure test via linearity of the model and its twists.

    The endomorphism model of a direct sum of rank-1 twists is again such a
    sum, over the pairwise differences phi_a - phi_b; the criterion reduces
    to sorted linearity of both full-mode profiles.
    """
    from .tropical import g_of_phi
    kv = model.kummer_for_var()
    own = RadiusProfile([
        (g_of_phi(s.phi, kummer=kv), s.rank) if not s.phi.is_zero
        else (TropicalFn(model.chart.n, []), s.rank)
        for s in model.summands])
    ok_m, _ = sorted_profile_linear(own)
    entries = []
    for a, b in itertools.product(model.summands, repeat=2):
        diff = a.phi - b.phi
        mult = a.rank * b.rank
        if diff.is_zero:
            entries.append((TropicalFn(model.chart.n, []), mult))
        else:
            entries.append((g_of_phi(diff, kummer=kv), mult))
    ok_end, _ = sorted_profile_linear(RadiusProfile(entries))
    return ok_m and ok_end, (ok_m, ok_end)
