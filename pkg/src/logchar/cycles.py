"""Cycle algebra on the log-cotangent bundle of a chart.

Components are the zero section, lines over divisor components with a
projective direction class, and lower-dimensional pieces.  Multiplicities
are rational while cycles are being assembled and must be integers at
finalization, so orbit normalizations stay auditable.

Directions are compared projectively by cross-multiplication; entries may be
polynomials on a finite cover of the divisor.  Divisor lines may carry an
irregularity row (the rational divisor row they came from): it is metadata
for Euler-characteristic evaluation and is ignored by cycle equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .field import QQ
from .laurent import LaurentPolynomial


class CycleError(ValueError):
    pass


class IntegralityError(AssertionError):
    pass


@dataclass(frozen=True)
class ChartStamp:
    """Ambient chart marker: variable names and which ones carry the log pole."""
    vars: Tuple[str, ...]
    log_vars: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars):
            raise CycleError("chart variables must be distinct")
        if not set(self.log_vars) <= set(self.vars):
            raise CycleError("log variables must be chart variables")

    @property
    def n(self):
        return len(self.vars)

    @property
    def m(self):
        return len(self.log_vars)

    def log_index(self, name: str) -> int:
        return self.log_vars.index(name)


def _as_poly(entry, vars, field=QQ):
    if isinstance(entry, LaurentPolynomial):
        return entry
    return LaurentPolynomial.constant(vars, entry, field)


class Direction:
    """Projective class [theta_1 : ... : theta_n] with polynomial entries."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence):
        es = tuple(entries)
        if not es:
            raise CycleError("empty direction")
        self_entries = []
        vars = None
        for e in es:
            if isinstance(e, LaurentPolynomial):
                vars = e.vars
        for e in es:
            if isinstance(e, LaurentPolynomial):
                self_entries.append(e)
            else:
                self_entries.append(_as_poly(e, vars if vars is not None else ()))
        if all(p.is_zero for p in self_entries):
            raise CycleError("direction must not vanish identically")
        object.__setattr__(self, "entries", tuple(self_entries))

    def __setattr__(self, *a):
        raise AttributeError("Direction is immutable")

    def __len__(self):
        return len(self.entries)

    def proportional_to(self, other: "Direction") -> bool:
        if len(self) != len(other):
            return False
        for i, j in itertools.combinations(range(len(self)), 2):
            if self.entries[i] * other.entries[j] != self.entries[j] * other.entries[i]:
                return False
        return True

    def scale_log_coordinates(self, factors: Dict[int, int]) -> "Direction":
        """Multiply selected coordinates by integer factors (log basis change)."""
        out = []
        for i, p in enumerate(self.entries):
            out.append(p * factors[i] if i in factors else p)
        return Direction(out)

    def pull_back_cover(self, exponent_factors) -> "Direction":
        """Substitute x_l -> x_l^{h_l} inside every entry."""
        return Direction([p.scale_exponents(exponent_factors) if not p.is_zero else p
                          for p in self.entries])

    def sort_key(self):
        def poly_key(p):
            return tuple((e, str(c)) for e, c in sorted(p.terms.items()))
        # normalize by the first nonzero entry when it is a constant
        first = next(p for p in self.entries if not p.is_zero)
        if len(first.terms) == 1 and not any(next(iter(first.terms))):
            c = first.constant_term()
            scaled = [p * c.inverse() for p in self.entries]
            return tuple(poly_key(p) for p in scaled)
        return tuple(poly_key(p) for p in self.entries)

    def __repr__(self):
        return "[" + " : ".join(str(p) for p in self.entries) + "]"


@dataclass(frozen=True)
class ZeroSection:
    def sort_key(self):
        return (0,)

    def describe(self, mult):
        return f"ZeroSection mult={mult}"


@dataclass(frozen=True)
class DivisorLine:
    divisor: str                      # log variable name
    direction: Direction
    cover_degree: int = 1             # residue-field degree of the cover of D_j
    row: Optional[Tuple[Fraction, ...]] = None  # irregularity row, chi metadata

    def sort_key(self):
        return (1, self.divisor, self.direction.sort_key(), self.cover_degree)

    def describe(self, mult):
        dirs = " ".join(str(p) for p in self.direction.entries)
        extra = f" cover={self.cover_degree}" if self.cover_degree != 1 else ""
        return f"Line D({self.divisor}) dir=[{dirs}]{extra} mult={mult}"


@dataclass(frozen=True)
class LowerDim:
    support: str
    dim: int

    def sort_key(self):
        return (2, self.dim, self.support)

    def describe(self, mult):
        return f"LowerDim dim={self.dim} mult={mult}"


Component = object


class LogCycle:
    """Finite sum of components with positive rational multiplicities."""

    __slots__ = ("chart", "parts")

    def __init__(self, chart: ChartStamp, parts):
        merged = []
        for comp, mult in parts:
            mult = Fraction(mult)
            if mult == 0:
                continue
            if mult < 0:
                raise CycleError("multiplicities must be positive")
            for i, (c, m) in enumerate(merged):
                if _same_component(c, comp):
                    merged[i] = (c, m + mult)
                    break
            else:
                merged.append((comp, mult))
        merged.sort(key=lambda cm: cm[0].sort_key())
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "parts", tuple(merged))

    def __setattr__(self, *a):
        raise AttributeError("LogCycle is immutable")

    def zero_section_multiplicity(self) -> Fraction:
        for c, m in self.parts:
            if isinstance(c, ZeroSection):
                return m
        return Fraction(0)

    def lines(self):
        return tuple((c, m) for c, m in self.parts if isinstance(c, DivisorLine))

    def finalize(self) -> "LogCycle":
        """Assert integrality of every multiplicity; returns self."""
        for c, m in self.parts:
            if m.denominator != 1:
                raise IntegralityError(f"non-integral multiplicity {m} on {c}")
        return self

    def report_lines(self):
        return [c.describe(m if m.denominator != 1 else m.numerator) for c, m in self.parts]

    def __repr__(self):
        return "LogCycle(" + "; ".join(self.report_lines()) + ")"


def _same_component(a, b) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, ZeroSection):
        return True
    if isinstance(a, DivisorLine):
        return (a.divisor == b.divisor and a.cover_degree == b.cover_degree
                and a.row == b.row and a.direction.proportional_to(b.direction))
    if isinstance(a, LowerDim):
        return a == b
    raise CycleError(f"unknown component {a!r}")


def cycle_equal(a: LogCycle, b: LogCycle) -> bool:
    """Exact cycle equality: directions projectively, rows ignored."""
    if a.chart != b.chart:
        raise CycleError("cycles live on different charts")
    return _aggregate(a) == _aggregate(b) and _lines_match(a, b)


def _aggregate(c: LogCycle):
    zero = c.zero_section_multiplicity()
    lower = sorted((comp.support, comp.dim, m) for comp, m in c.parts
                   if isinstance(comp, LowerDim))
    per_divisor = {}
    for comp, m in c.lines():
        per_divisor[comp.divisor] = per_divisor.get(comp.divisor, 0) + m
    return zero, tuple(lower), tuple(sorted(per_divisor.items()))


def _lines_match(a: LogCycle, b: LogCycle) -> bool:
    """Row-blind matching of divisor lines: group by projective direction."""
    def grouped(c):
        groups = []
        for comp, m in c.lines():
            for g in groups:
                rep = g[0]
                if rep.divisor == comp.divisor and rep.cover_degree == comp.cover_degree \
                        and rep.direction.proportional_to(comp.direction):
                    g[1] += m
                    break
            else:
                groups.append([comp, m])
        return groups
    ga, gb = grouped(a), grouped(b)
    if len(ga) != len(gb):
        return False
    used = [False] * len(gb)
    for comp, m in ga:
        for i, (comp2, m2) in enumerate(gb):
            if used[i]:
                continue
            if comp2.divisor == comp.divisor and comp2.cover_degree == comp.cover_degree \
                    and m == m2 and comp.direction.proportional_to(comp2.direction):
                used[i] = True
                break
        else:
            return False
    return True


def kummer_pullback(c: LogCycle, h: Dict[str, int]) -> LogCycle:
    """Pull a cycle back along x_j -> x_j^{h_j} on the log divisors.

    The zero section is unchanged.  A line over D_j gains multiplicity h_j;
    its direction entries, functions on the divisor, pull back through the
    substitution x_l -> x_l^{h_l}, and the log coordinate l picks up the
    factor h_l (the log basis rescales as dx_l/x_l -> h_l dx'_l/x'_l).
    Irregularity rows scale coordinatewise.
    """
    chart = c.chart
    for name, hj in h.items():
        if name not in chart.log_vars:
            raise CycleError(f"{name} is not a log variable")
        if hj < 1:
            raise CycleError("cover exponents must be positive integers")
    factors = {chart.vars.index(name): hj for name, hj in h.items()}
    exp_factors = [factors.get(j, 1) for j in range(chart.n)]
    parts = []
    for comp, m in c.parts:
        if isinstance(comp, ZeroSection):
            parts.append((comp, m))
        elif isinstance(comp, DivisorLine):
            hj = h.get(comp.divisor, 1)
            direction = comp.direction.pull_back_cover(exp_factors) \
                                      .scale_log_coordinates(factors)
            row = comp.row
            if row is not None:
                row = tuple(r * h.get(name, 1)
                            for r, name in zip(row, chart.log_vars))
            parts.append((DivisorLine(comp.divisor, direction, comp.cover_degree, row),
                          m * hj))
        else:
            parts.append((comp, m))
    return LogCycle(chart, parts)


def pushforward_from_cover(c: LogCycle, orbits: Sequence[Sequence[int]],
                           residue_degrees: Optional[Sequence[int]] = None) -> LogCycle:
    """Merge Galois-conjugate divisor lines of a cover cycle.

    ``orbits`` partitions the line components (by index into c.lines()); each
    orbit becomes one line carrying the summed multiplicity and the orbit's
    residue degree as cover degree.  Non-line components pass through, and
    the result must be integral.
    """
    lines = c.lines()
    seen = sorted(i for orbit in orbits for i in orbit)
    if seen != list(range(len(lines))):
        raise CycleError("orbits must partition the line components")
    parts = [(comp, m) for comp, m in c.parts if not isinstance(comp, DivisorLine)]
    for k, orbit in enumerate(orbits):
        total = sum(lines[i][1] for i in orbit)
        rep, _ = lines[orbit[0]]
        if any(lines[i][0].divisor != rep.divisor for i in orbit):
            raise CycleError("an orbit must stay over one divisor")
        deg = residue_degrees[k] if residue_degrees is not None else 1
        parts.append((DivisorLine(rep.divisor, rep.direction, deg, rep.row), total))
    return LogCycle(c.chart, parts).finalize()


# -- structured gr extraction ------------------------------------------------

def _local_length_of_power(b: int) -> int:
    """Length of k[x]_(x) / (x^b): the standard monomials are 1, x, .., x^{b-1}."""
    assert b >= 0
    return sum(1 for e in range(b) if e < b)


def gr_extract_structured(chart: ChartStamp, b_vector: Sequence[int],
                          theta: Sequence, rank: int,
                          row: Optional[Sequence[Fraction]] = None) -> LogCycle:
    """Cycle of the graded module with relations (t xi_1, theta_1 xi_j - theta_j xi_1).

    Here t = prod x_j^{b_j} over the log divisors.  The support is the zero
    section plus, over each divisor with b_j > 0, the line in direction
    theta; the generic-point length over D_j is the length of a b_j-th power
    thickening, and every multiplicity is scaled by the rank.
    """
    if rank < 1:
        raise CycleError("rank must be positive")
    bs = [int(b) for b in b_vector]
    if len(bs) != chart.m:
        raise CycleError("one pole order per log divisor required")
    if any(b < 0 for b in bs):
        raise CycleError("pole orders must be nonnegative")
    parts = [(ZeroSection(), Fraction(rank))]
    if any(bs):
        entries = [_as_poly(e, chart.vars) for e in theta]
        if len(entries) != chart.n:
            raise CycleError("one direction coordinate per chart variable required")
        row_t = tuple(Fraction(x) for x in (row if row is not None else bs))
        for name, b in zip(chart.log_vars, bs):
            if b == 0:
                continue
            j = chart.vars.index(name)
            red = entries[j].restrict_to_zero(j)
            if red.is_zero:
                raise CycleError(f"direction coordinate of {name} vanishes along its divisor")
            restricted = Direction([p.restrict_to_zero(j) for p in entries])
            length = _local_length_of_power(b)
            parts.append((DivisorLine(name, restricted, 1, row_t), Fraction(rank * length)))
    return LogCycle(chart, parts).finalize()


# -- monomial log modules -----------------------------------------------------

@dataclass(frozen=True)
class MonomialLogModule:
    """Graded module over k[x, xi] presented by monomial relations.

    Generators carry integer filtration degrees; each relation kills a
    monomial multiple of one generator.  Exponents are (x-part, xi-part),
    each of length n (chart dimension <= 2).
    """
    chart: ChartStamp
    generator_degrees: Tuple[int, ...]
    relations: Tuple[Tuple[int, Tuple[int, ...], Tuple[int, ...]], ...]

    def __post_init__(self):
        n = self.chart.n
        if n > 2:
            raise CycleError("monomial modules implemented for chart dimension <= 2")
        if not self.generator_degrees:
            raise CycleError("module needs at least one generator")
        for gen, xexp, xiexp in self.relations:
            if not 0 <= gen < len(self.generator_degrees):
                raise CycleError("relation refers to a missing generator")
            if len(xexp) != n or len(xiexp) != n:
                raise CycleError("relation exponent arity mismatch")
            if any(a < 0 for a in xexp + xiexp):
                raise CycleError("relations must be monomial with nonnegative exponents")

    def annihilator(self, gen: int):
        return [(x, xi) for g, x, xi in self.relations if g == gen]


def _minimal_covers(supports, nvars):
    """Minimal variable sets meeting the support of every generator.

    These are exactly the minimal primes of the monomial ideal.
    """
    if any(not s for s in supports):
        return []  # a unit relation kills the generator entirely
    covers = []
    for size in range(1, nvars + 1):
        for cand in itertools.combinations(range(nvars), size):
            cset = set(cand)
            if any(set(c) <= cset for c in covers):
                continue
            if all(cset & s for s in supports):
                covers.append(cand)
    return covers


def _standard_monomial_count(gens, subset):
    """Count monomials in the subset variables outside the localized ideal."""
    # localize: drop variables outside subset from each generator
    local = [tuple(e[i] if i in subset else 0 for i in range(len(e))) for e in gens]
    local = [g for g in local if any(g)]
    if not local:
        return None  # not finite: localized ideal is zero
    count = 0
    bounds = [max(g[i] for g in local) if any(g[i] for g in local) else 1
              for i in range(len(local[0]))]
    for exp in itertools.product(*[range(max(b, 1)) for b in bounds]):
        e = tuple(exp[i] if i in subset else 0 for i in range(len(exp)))
        if any(i not in subset and exp[i] > 0 for i in range(len(exp))):
            continue
        if not any(all(e[i] >= g[i] for i in range(len(e))) for g in local):
            count += 1
    return count


def monomial_char_cycle(M: MonomialLogModule) -> LogCycle:
    """Support components with generic-point multiplicities, per generator.

    Variables are ordered (x_1..x_n, xi_1..xi_n); components are classified
    as the zero section V(xi), divisor lines V(x_j, xi_l), or lower
    dimensional coordinate subspaces.
    """
    chart = M.chart
    n = chart.n
    parts = []
    for gen in range(len(M.generator_degrees)):
        ann = M.annihilator(gen)
        gens = [x + xi for x, xi in ann]
        total_vars = 2 * n
        if not gens:
            # free: support is the whole space; report as a LowerDim of full dim
            parts.append((LowerDim("T*X^log", 2 * n), Fraction(1)))
            continue
        supports = [set(i for i, a in enumerate(g) if a) for g in gens]
        for cover in _minimal_covers(supports, total_vars):
            subset = set(cover)
            length = _standard_monomial_count(gens, subset)
            if length is None or length == 0:
                continue
            comp = _classify_subspace(chart, subset, n)
            parts.append((comp, Fraction(length)))
    return LogCycle(chart, parts)


def _classify_subspace(chart: ChartStamp, killed, n):
    """V(variables in `killed`) inside Spec k[x, xi]."""
    xs = {i for i in killed if i < n}
    xis = {i - n for i in killed if i >= n}
    dim = 2 * n - len(killed)
    if not xs and xis == set(range(n)):
        return ZeroSection()
    if len(xs) == 1 and dim == n:
        j = next(iter(xs))
        name = chart.vars[j]
        if name in chart.log_vars:
            free_xi = [i for i in range(n) if i not in xis]
            direction = [0] * n
            for i in free_xi:
                direction[i] = 1
            entries = [LaurentPolynomial.constant(chart.vars, d) for d in direction]
            return DivisorLine(name, Direction(entries), 1, None)
    desc = "V(" + ",".join(
        [chart.vars[i] for i in sorted(xs)] + [f"xi_{chart.vars[i]}" for i in sorted(xis)]) + ")"
    return LowerDim(desc, dim)


def hilbert_dim(M: MonomialLogModule) -> int:
    """Growth degree of dim fil_alpha with every variable in degree one.

    Counts standard monomials of total degree <= alpha (shifted by generator
    degrees) and reads the eventual polynomial degree off finite differences.
    """
    chart = M.chart
    n2 = 2 * chart.n
    upto = 14
    counts = []
    for alpha in range(upto):
        total = 0
        for gen, shift in enumerate(M.generator_degrees):
            ann = [x + xi for x, xi in M.annihilator(gen)]
            budget = alpha - shift
            if budget < 0:
                continue
            total += _count_standard_below(ann, n2, budget)
        counts.append(total)
    seq = counts
    for degree in range(0, n2 + 1):
        tail = seq[max(2, len(seq) - 6):]
        if all(x == tail[0] for x in tail):
            return degree
        seq = [b - a for a, b in zip(seq, seq[1:])]
    raise CycleError("filtration growth not polynomial in the sampled range")


def _count_standard_below(gens, nvars, budget):
    count = 0
    for exp in _exps_upto(nvars, budget):
        if not any(all(exp[i] >= g[i] for i in range(nvars)) for g in gens):
            count += 1
    return count


def _exps_upto(nvars, budget):
    if nvars == 0:
        yield ()
        return
    for head in range(budget + 1):
        for rest in _exps_upto(nvars - 1, budget - head):
            yield (head,) + rest
