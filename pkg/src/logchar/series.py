"""One-variable truncated Laurent series with worst-case precision tracking.

A LaurentSeries stores finitely many exact coefficients below a precision
bound ``prec``: terms of exponent >= prec are unknown.  ``prec = None`` marks
a series that is exactly its stored finite sum (polynomial-born); such series
stay exact under ring operations, and only inversion forces a finite window.

Coefficients are Scalars, or any exact coefficient object exposing the same
arithmetic (LaurentPolynomial works, for series over a function field).
"""

from __future__ import annotations

import os
from typing import Mapping, Optional

from .field import QQ, Scalar

_DEFAULT_WINDOW = 32


class PrecisionError(ArithmeticError):
    pass


def default_precision_window() -> int:
    env = os.environ.get("LOGCHAR_PRECISION")
    if env:
        try:
            n = int(env)
            if n >= 4:
                return n
        except ValueError:
            pass
    return _DEFAULT_WINDOW


def _is_zero_coeff(c):
    z = getattr(c, "is_zero", None)
    if z is None:
        return c == 0
    return z


class LaurentSeries:
    __slots__ = ("var", "terms", "prec", "field")

    def __init__(self, var: str, terms: Mapping[int, object], prec: Optional[int] = None,
                 field=QQ):
        clean = {}
        for e, c in terms.items():
            e = int(e)
            if prec is not None and e >= prec:
                continue
            cc = c if isinstance(c, Scalar) or hasattr(c, "is_zero") else field(c)
            if not _is_zero_coeff(cc):
                clean[e] = cc
        if prec is not None and clean and min(clean) >= prec:
            raise ValueError("stored exponents must lie below the precision bound")
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "field", field)

    def __setattr__(self, *a):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, var="t", field=QQ):
        return cls(var, {}, None, field)

    @classmethod
    def constant(cls, value, var="t", field=QQ):
        return cls(var, {0: value}, None, field)

    @classmethod
    def monomial(cls, exp: int, coeff=1, var="t", field=QQ):
        return cls(var, {exp: coeff}, None, field)

    # -- structure ---------------------------------------------------------

    @property
    def is_exact(self):
        return self.prec is None

    @property
    def is_exactly_zero(self):
        return self.prec is None and not self.terms

    def low_bound(self):
        """A lower bound for the valuation (exact when a term is stored)."""
        if self.terms:
            return min(self.terms)
        return self.prec  # None means +infinity (exact zero)

    def valuation(self) -> Optional[int]:
        """Certified valuation: stored nonzero term, exact zero -> None.

        Raises PrecisionError when the series is indistinguishable from zero
        at its precision.
        """
        if self.terms:
            return min(self.terms)
        if self.prec is None:
            return None
        raise PrecisionError(f"valuation unknown: zero up to O({self.var}^{self.prec})")

    def leading_coefficient(self):
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("leading coefficient of exact zero")
        return self.terms[v]

    def coefficient(self, e: int):
        if self.prec is not None and e >= self.prec:
            raise PrecisionError(f"coefficient of {self.var}^{e} beyond precision {self.prec}")
        c = self.terms.get(e)
        return c if c is not None else self.field.zero()

    def _check(self, other):
        if self.var != other.var:
            raise ValueError("series variables differ")

    @staticmethod
    def _min_prec(p1, p2):
        if p1 is None:
            return p2
        if p2 is None:
            return p1
        return min(p1, p2)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            return other
        return LaurentSeries.constant(other, self.var, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        self._check(o)
        prec = self._min_prec(self.prec, o.prec)
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if _is_zero_coeff(s):
                out.pop(e, None)
            else:
                out[e] = s
        return LaurentSeries(self.var, out, prec, self.field)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.var, {e: -c for e, c in self.terms.items()}, self.prec,
                             self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        self._check(o)
        v1, v2 = self.low_bound(), o.low_bound()
        if (self.is_exactly_zero and o.prec is None) or (o.is_exactly_zero and self.prec is None):
            return LaurentSeries.zero(self.var, self.field)
        # unknown tail of one factor times the lowest term of the other
        cands = []
        if self.prec is not None:
            if v2 is None:
                return LaurentSeries.zero(self.var, self.field)
            cands.append(self.prec + v2)
        if o.prec is not None:
            if v1 is None:
                return LaurentSeries.zero(self.var, self.field)
            cands.append(o.prec + v1)
        prec = min(cands) if cands else None
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = e1 + e2
                if prec is not None and e >= prec:
                    continue
                c = c1 * c2
                s = out.get(e)
                s = c if s is None else s + c
                if _is_zero_coeff(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return LaurentSeries(self.var, out, prec, self.field)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t^k."""
        return LaurentSeries(self.var, {e + k: c for e, c in self.terms.items()},
                             None if self.prec is None else self.prec + k, self.field)

    def derivative(self) -> "LaurentSeries":
        out = {e - 1: c * e for e, c in self.terms.items() if e != 0}
        prec = None if self.prec is None else self.prec - 1
        return LaurentSeries(self.var, out, prec, self.field)

    def log_derivative(self) -> "LaurentSeries":
        """t d/dt; exponent-preserving."""
        return LaurentSeries(self.var, {e: c * e for e, c in self.terms.items() if e != 0},
                             self.prec, self.field)

    def truncate(self, prec: int) -> "LaurentSeries":
        p = self._min_prec(self.prec, prec)
        return LaurentSeries(self.var, {e: c for e, c in self.terms.items() if e < p}, p,
                             self.field)

    def inverse(self, window: Optional[int] = None) -> "LaurentSeries":
        """Multiplicative inverse up to a finite window of terms.

        Requires a certified valuation and an invertible leading coefficient;
        the result has finite precision even for exact input.
        """
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("inverse of zero series")
        lead = self.terms[v]
        if not isinstance(lead, Scalar):
            raise PrecisionError("series inversion requires scalar coefficients")
        w = window if window is not None else default_precision_window()
        if self.prec is not None:
            w = min(w, self.prec - v)
        inv_lead = lead.inverse()
        # u = 1 - (self * t^{-v} / lead), valuation >= 1; invert geometrically
        norm = self.shift(-v) * inv_lead
        u = LaurentSeries.constant(1, self.var, self.field) - norm
        acc = LaurentSeries.constant(1, self.var, self.field).truncate(w)
        power = u.truncate(w)
        while not power.is_exactly_zero and power.terms:
            acc = (acc + power).truncate(w)
            power = (power * u).truncate(w)
        out = (acc * inv_lead).shift(-v)
        return out.truncate(w - v)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inverse()

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            other = self._coerce(other)
        return (self.var == other.var and self.terms == other.terms
                and self.prec == other.prec)

    def agrees_with(self, other, upto: Optional[int] = None) -> bool:
        """Coefficientwise agreement on the jointly known exponent range."""
        o = self._coerce(other)
        self._check(o)
        bound = self._min_prec(self.prec, o.prec)
        if upto is not None:
            bound = self._min_prec(bound, upto)
        for e in set(self.terms) | set(o.terms):
            if bound is not None and e >= bound:
                continue
            if self.terms.get(e, 0) != o.terms.get(e, 0):
                return False
        return True

    def __hash__(self):
        return hash((self.var, tuple(self.terms.items()), self.prec))

    def substitute_power(self, h: int) -> "LaurentSeries":
        """Substitute t -> t^h (Kummer pullback of the coefficient field)."""
        if h < 1:
            raise ValueError("power must be positive")
        return LaurentSeries(self.var, {e * h: c for e, c in self.terms.items()},
                             None if self.prec is None else self.prec * h, self.field)

    def rescale(self, c) -> "LaurentSeries":
        """Substitute t -> c*t for a nonzero scalar c."""
        cc = c if isinstance(c, Scalar) else self.field(c)
        if cc.is_zero:
            raise ValueError("rescale by zero")
        return LaurentSeries(self.var, {e: coef * cc ** e for e, coef in self.terms.items()},
                             self.prec, self.field)

    def __repr__(self):
        return f"LaurentSeries({self})"

    def __str__(self):
        t = self.var
        parts = []
        for e, c in self.terms.items():
            if e == 0:
                parts.append(f"{c}")
            else:
                mono = t if e == 1 else f"{t}^{e}"
                parts.append(mono if str(c) == "1" else f"({c})*{mono}")
        body = " + ".join(parts) if parts else "0"
        if self.prec is not None:
            body += f" + O({t}^{self.prec})"
        return body
