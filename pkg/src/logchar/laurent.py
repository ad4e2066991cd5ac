"""Exact multivariate Laurent polynomials and weighted (Gauss-norm) valuations.

A LaurentPolynomial is a finite support map from integer exponent vectors to
nonzero Scalars over a fixed ordered variable list.  Values are immutable;
all arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Mapping, Optional, Sequence, Tuple

from .field import QQ, NumberField, Scalar


class DimensionMismatch(ValueError):
    pass


class WeightVector:
    """Nonnegative rational weights, one per variable.

    mode "full" leaves all coordinates free; mode "sharp" pins the non-log
    coordinates (those past ``nlog``) to zero.
    """

    __slots__ = ("r", "mode", "nlog")

    def __init__(self, r: Sequence, mode: str = "full", nlog: Optional[int] = None):
        rr = tuple(Fraction(x) for x in r)
        if any(x < 0 for x in rr):
            raise ValueError("weights must be nonnegative")
        if mode not in ("full", "sharp"):
            raise ValueError("mode must be 'full' or 'sharp'")
        if mode == "sharp":
            if nlog is None:
                raise ValueError("sharp mode needs the number of log coordinates")
            if any(x != 0 for x in rr[nlog:]):
                raise ValueError("sharp mode pins non-log coordinates to 0")
        object.__setattr__(self, "r", rr)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "nlog", nlog)

    def __setattr__(self, *a):
        raise AttributeError("WeightVector is immutable")

    def __len__(self):
        return len(self.r)

    def __iter__(self):
        return iter(self.r)

    def __repr__(self):
        return f"WeightVector({self.r}, {self.mode})"


class LaurentPolynomial:
    __slots__ = ("vars", "terms", "field")

    def __init__(self, vars: Sequence[str], terms: Mapping[Tuple[int, ...], object],
                 field: NumberField = QQ):
        vs = tuple(vars)
        if len(set(vs)) != len(vs):
            raise ValueError("variable names must be distinct")
        # widen the declared field when number-field coefficients appear
        for coef in terms.values():
            if isinstance(coef, Scalar) and coef.field != field:
                if field.is_rational:
                    field = coef.field
                elif not coef.field.is_rational:
                    raise DimensionMismatch("coefficients from distinct number fields")
        clean = {}
        for exp, coef in terms.items():
            e = tuple(int(x) for x in exp)
            if len(e) != len(vs):
                raise DimensionMismatch(f"exponent arity {len(e)} != {len(vs)} variables")
            c = coef if isinstance(coef, Scalar) else field(coef)
            if c.field != field:
                c = field(c)
            if not c.is_zero:
                prev = clean.get(e)
                c = c if prev is None else prev + c
                if c.is_zero:
                    del clean[e]
                else:
                    clean[e] = c
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, *a):
        raise AttributeError("LaurentPolynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars, field=QQ):
        return cls(vars, {}, field)

    @classmethod
    def constant(cls, vars, value, field=QQ):
        return cls(vars, {(0,) * len(vars): value}, field)

    @classmethod
    def monomial(cls, vars, exp, coeff=1, field=QQ):
        return cls(vars, {tuple(exp): coeff}, field)

    @classmethod
    def variable(cls, vars, name, field=QQ):
        i = tuple(vars).index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls(vars, {tuple(e): 1}, field)

    # -- basic structure ---------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def support(self):
        return tuple(self.terms.keys())

    def coefficient(self, exp) -> Scalar:
        return self.terms.get(tuple(exp), self.field.zero())

    def constant_term(self) -> Scalar:
        return self.coefficient((0,) * len(self.vars))

    def min_exponent(self, j: int):
        """Smallest exponent of variable j over the support; None if zero."""
        if self.is_zero:
            return None
        return min(e[j] for e in self.terms)

    def max_exponent(self, j: int):
        if self.is_zero:
            return None
        return max(e[j] for e in self.terms)

    def _check_same(self, other):
        if self.vars != other.vars:
            raise DimensionMismatch("variable lists differ")
        if self.field != other.field:
            if self.field.is_rational:
                return other.field
            if other.field.is_rational:
                return self.field
            raise DimensionMismatch("fields differ")
        return self.field

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = LaurentPolynomial.constant(self.vars, other, self.field)
        field = self._check_same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero:
                out.pop(e, None)
            else:
                out[e] = s
        return LaurentPolynomial(self.vars, out, field)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.vars, {e: -c for e, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = LaurentPolynomial.constant(self.vars, other, self.field)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            c0 = other if isinstance(other, Scalar) else self.field(other)
            if c0.is_zero:
                return LaurentPolynomial.zero(self.vars, self.field)
            return LaurentPolynomial(self.vars, {e: c * c0 for e, c in self.terms.items()},
                                     self.field)
        field = self._check_same(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = out.get(e)
                s = c if s is None else s + c
                if s.is_zero:
                    out.pop(e, None)
                else:
                    out[e] = s
        return LaurentPolynomial(self.vars, out, field)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("negative powers only for monomials")
            (e, c), = self.terms.items()
            return LaurentPolynomial(self.vars, {tuple(x * n for x in e): c ** n}, self.field)
        out = LaurentPolynomial.constant(self.vars, 1, self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = LaurentPolynomial.constant(self.vars, other, self.field)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, tuple(sorted((e, c.coeffs) for e, c in self.terms.items()))))

    # -- derivations and substitutions -------------------------------------

    def partial(self, j: int) -> "LaurentPolynomial":
        out = {}
        for e, c in self.terms.items():
            if e[j] == 0:
                continue
            e2 = list(e)
            e2[j] -= 1
            out[tuple(e2)] = c * e[j]
        return LaurentPolynomial(self.vars, out, self.field)

    def log_partial(self, j: int) -> "LaurentPolynomial":
        """x_j * d/dx_j, an exponent-preserving derivation."""
        return LaurentPolynomial(self.vars,
                                 {e: c * e[j] for e, c in self.terms.items() if e[j] != 0},
                                 self.field)

    def scale_exponents(self, factors: Sequence[int]) -> "LaurentPolynomial":
        """Substitute x_j -> x_j^{h_j} (Kummer rescale of the support)."""
        if len(factors) != len(self.vars):
            raise DimensionMismatch("one factor per variable required")
        out = {tuple(a * h for a, h in zip(e, factors)): c for e, c in self.terms.items()}
        return LaurentPolynomial(self.vars, out, self.field)

    def shift_variable(self, j: int, value) -> "LaurentPolynomial":
        """Substitute x_j -> x_j + value; requires nonnegative exponents in x_j."""
        val = value if isinstance(value, Scalar) else self.field(value)
        out = LaurentPolynomial.zero(self.vars, self.field)
        acc = {}
        for e, c in self.terms.items():
            if e[j] < 0:
                raise ValueError("shift of a variable with negative exponent")
            for k in range(e[j] + 1):
                e2 = list(e)
                e2[j] = k
                key = tuple(e2)
                add = c * (comb(e[j], k) * 1) * val ** (e[j] - k)
                s = acc.get(key)
                s = add if s is None else s + add
                if s.is_zero:
                    acc.pop(key, None)
                else:
                    acc[key] = s
        return LaurentPolynomial(self.vars, acc, self.field)

    def restrict_to_zero(self, j: int) -> "LaurentPolynomial":
        """Set x_j = 0; requires nonnegative exponents in x_j."""
        out = {}
        for e, c in self.terms.items():
            if e[j] < 0:
                raise ValueError("restriction of a pole to its own divisor")
            if e[j] == 0:
                out[e] = c
        return LaurentPolynomial(self.vars, out, self.field)

    def drop_variable(self, j: int) -> "LaurentPolynomial":
        """Remove variable j from the chart; all exponents of x_j must be 0."""
        if any(e[j] != 0 for e in self.terms):
            raise ValueError("variable still occurs")
        vs = self.vars[:j] + self.vars[j + 1:]
        return LaurentPolynomial(vs, {e[:j] + e[j + 1:]: c for e, c in self.terms.items()},
                                 self.field)

    def evaluate(self, point: Mapping[str, object]) -> Scalar:
        """Full evaluation; negative exponents require nonzero coordinates."""
        vals = []
        for name in self.vars:
            if name not in point:
                raise ValueError(f"missing coordinate {name}")
            v = point[name]
            vals.append(v if isinstance(v, Scalar) else self.field(v))
        total = self.field.zero()
        for e, c in self.terms.items():
            term = c
            for x, a in zip(vals, e):
                if a == 0:
                    continue
                if x.is_zero:
                    if a < 0:
                        raise ZeroDivisionError("pole evaluated at its divisor")
                    term = self.field.zero()
                    break
                term = term * x ** a
            total = total + term
        return total

    def __repr__(self):
        return f"LaurentPolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(f"{v}^{a}" if a != 1 else v
                            for v, a in zip(self.vars, e) if a != 0)
            cs = str(c)
            if mono:
                parts.append(f"({cs})*{mono}" if ("+" in cs or " " in cs) else
                             (mono if cs == "1" else f"-{mono}" if cs == "-1" else f"{cs}*{mono}"))
            else:
                parts.append(cs)
        return " + ".join(parts)


# -- module operations -----------------------------------------------------

def weighted_valuation(phi: LaurentPolynomial, r: WeightVector):
    """min over the support of <a, r>; +infinity (None) iff phi = 0.

    This is the valuation -log |phi|_r of the Gauss norm weighting x_j by
    e^{-r_j}.
    """
    if len(r) != len(phi.vars):
        raise DimensionMismatch("weight vector length differs from variable count")
    if phi.is_zero:
        return None
    return min(sum(Fraction(a) * w for a, w in zip(e, r.r)) for e in phi.terms)


def log_derivative(phi: LaurentPolynomial, j: int, nlog: int) -> LaurentPolynomial:
    """x_j d/dx_j for log coordinates (j < nlog), plain d/dx_j after them.

    Coordinates are 0-based; the first ``nlog`` variables carry the log
    structure.
    """
    if not 0 <= j < len(phi.vars):
        raise IndexError("variable index out of range")
    return phi.log_partial(j) if j < nlog else phi.partial(j)


def is_unit_in_R_n0(u: LaurentPolynomial) -> bool:
    """Unit test in the formal power-series ring: support in N^n, u(0) != 0."""
    if u.is_zero:
        return False
    if any(a < 0 for e in u.terms for a in e):
        return False
    return not u.constant_term().is_zero


def monomial_times_unit(phi: LaurentPolynomial, log_indices: Sequence[int]):
    """Decompose phi = u * prod x_j^{-i_j} over the log variables, if possible.

    Returns (i_vector, u) with i_j >= 0 and u a power-series unit, or None if
    no such form exists.  Entries of i_vector follow log_indices order.
    """
    if phi.is_zero:
        return None
    pole = []
    shifted = phi
    for j in log_indices:
        m = phi.min_exponent(j)
        i_j = max(0, -m)
        pole.append(i_j)
        if i_j:
            e = [0] * len(phi.vars)
            e[j] = i_j
            shifted = shifted * LaurentPolynomial.monomial(phi.vars, e, 1, phi.field)
    if is_unit_in_R_n0(shifted):
        return tuple(pole), shifted
    return None
