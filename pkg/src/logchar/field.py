"""Exact base-field arithmetic: rationals and small number fields Q[alpha]/(p).

Every value is immutable and equality is exact.  Number-field elements are
stored as reduced polynomial representatives in the generator, with Fraction
coefficients; fractions are gcd-normalized by the Fraction type itself.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union
import warnings

Rat = Union[int, Fraction]

MAX_FIELD_DEGREE = 6


class FieldError(ValueError):
    pass


def _poly_trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _poly_divmod(a, b):
    # a, b lists of Fractions, b != 0
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = Fraction(1) / b[-1]
    while len(a) >= len(b) and _poly_trim(a):
        a = _poly_trim(a)
        if len(a) < len(b):
            break
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] -= c * bc
        a.pop()
    return q, _poly_trim(a)


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _rational_roots(coeffs):
    """Rational roots of a polynomial with Fraction coefficients (ascending)."""
    cs = _poly_trim([Fraction(c) for c in coeffs])
    if len(cs) <= 1:
        return []
    roots = set()
    k = 0
    while cs[k] == 0:
        k += 1
    if k > 0:
        roots.add(Fraction(0))
        cs = cs[k:]
    if len(cs) > 1:
        den = 1
        for c in cs:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in cs]
        a0, an = abs(ints[0]), abs(ints[-1])
        for p in _divisors(a0):
            for q in _divisors(an):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if sum(c * cand**i for i, c in enumerate(cs)) == 0:
                        roots.add(cand)
    return sorted(roots)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _is_square_fraction(x: Fraction):
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = _isqrt(num), _isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _isqrt(n):
    if n < 0:
        return -1
    x = int(n**0.5)
    while x * x > n:
        x -= 1
    while (x + 1) * (x + 1) <= n:
        x += 1
    return x


def _irreducible_over_Q(coeffs):
    """Decide irreducibility over Q for degree <= 4 (monic, Fraction coeffs).

    Degree 5 and 6 are trusted with a warning; the verdict None means
    "not verified".
    """
    cs = _poly_trim(coeffs)
    deg = len(cs) - 1
    if deg <= 1:
        return True
    if cs[0] == 0:
        return False
    if _rational_roots(cs):
        return False
    if deg <= 3:
        return True  # no rational root => irreducible for deg 2, 3
    if deg == 4:
        # monic normalization
        lead = cs[-1]
        m = [c / lead for c in cs]
        a, b, c, d = m[3], m[2], m[1], m[0]
        # depress: x = y - a/4
        p = b - 3 * a * a / 4
        q = c - a * b / 2 + a**3 / 8
        r = d - a * c / 4 + a * a * b / 16 - 3 * a**4 / 256
        # y^4+py^2+qy+r = (y^2+sy+u)(y^2-sy+v): s^2 root of resolvent
        # z^3 + 2p z^2 + (p^2-4r) z - q^2 = 0 with z = s^2
        res = [-q * q, p * p - 4 * r, 2 * p, Fraction(1)]
        for z in _rational_roots(res):
            if z < 0:
                continue
            s = _is_square_fraction(z)
            if s is None:
                continue
            if s == 0:
                # (y^2+u)(y^2+v): u+v=p, uv=r
                disc = _is_square_fraction(p * p - 4 * r)
                if disc is not None:
                    return False
            else:
                u = (p + z + q / s) / 2
                v = (p + z - q / s) / 2
                if u + v == p + z and u * v == r:
                    return False
        return True
    return None


class NumberField:
    """Q or Q[alpha]/(p(alpha)) with p monic of degree <= 6."""

    def __init__(self, modulus=None, gen_name: str = "a"):
        if modulus is None:
            self.modulus = None
            self.degree = 1
        else:
            cs = [Fraction(c) for c in modulus]
            cs = _poly_trim(cs)
            if len(cs) - 1 < 1 or len(cs) - 1 > MAX_FIELD_DEGREE:
                raise FieldError("modulus degree must be between 1 and %d" % MAX_FIELD_DEGREE)
            if cs[-1] != 1:
                raise FieldError("modulus must be monic")
            verdict = _irreducible_over_Q(cs)
            if verdict is False:
                raise FieldError("modulus is reducible over Q")
            if verdict is None:
                warnings.warn("irreducibility not verified for degree > 4 modulus; trusted")
            self.modulus = tuple(cs)
            self.degree = len(cs) - 1
        self.gen_name = gen_name

    @property
    def is_rational(self):
        return self.modulus is None

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        if self.is_rational:
            return "QQ"
        return f"NumberField({self.gen_name}: {list(self.modulus)})"

    def __call__(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field == self:
                return value
            if value.field.is_rational:
                return Scalar(self, (value.coeffs[0],) if value.coeffs else ())
            raise FieldError("cannot coerce between distinct number fields")
        return Scalar(self, (Fraction(value),))

    def zero(self):
        return Scalar(self, ())

    def one(self):
        return Scalar(self, (Fraction(1),))

    def gen(self):
        if self.is_rational:
            raise FieldError("QQ has no generator")
        return Scalar(self, (Fraction(0), Fraction(1)))


QQ = NumberField()


class Scalar:
    """Element of a NumberField, reduced mod the defining polynomial."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Iterable[Fraction]):
        cs = [Fraction(c) for c in coeffs]
        if field.modulus is not None and len(cs) >= len(field.modulus):
            _, cs = _poly_divmod(cs, list(field.modulus))
        elif field.modulus is None and len(cs) > 1:
            raise FieldError("rational scalar with nonconstant representative")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(_poly_trim(cs)))

    def __setattr__(self, *a):
        raise AttributeError("Scalar is immutable")

    def _pair(self, other):
        """Promote self and other into a common field; None if impossible."""
        if isinstance(other, (int, Fraction)):
            return self, self.field(other)
        if isinstance(other, Scalar):
            if other.field == self.field:
                return self, other
            if other.field.is_rational:
                return self, self.field(other)
            if self.field.is_rational:
                return other.field(self), other
            raise FieldError("cannot mix distinct number fields")
        return None

    @property
    def is_zero(self):
        return not self.coeffs

    def is_rational_value(self):
        return len(self.coeffs) <= 1

    def rational_value(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if len(self.coeffs) == 1:
            return self.coeffs[0]
        raise FieldError("scalar is not rational")

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        n = max(len(a.coeffs), len(b.coeffs))
        cs = [Fraction(0)] * n
        for i, c in enumerate(a.coeffs):
            cs[i] += c
        for i, c in enumerate(b.coeffs):
            cs[i] += c
        return Scalar(a.field, cs)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Scalar(a.field, _poly_mul(list(a.coeffs), list(b.coeffs)))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise ZeroDivisionError("scalar inverse of zero")
        if self.field.modulus is None:
            return Scalar(self.field, (Fraction(1) / self.coeffs[0],))
        # extended Euclid in Q[alpha]
        r0, r1 = list(self.field.modulus), list(self.coeffs)
        t0, t1 = [], [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
        if len(r0) != 1:
            raise FieldError("modulus not irreducible: gcd has positive degree")
        inv_lead = Fraction(1) / r0[0]
        return Scalar(self.field, [c * inv_lead for c in t0])

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coeffs == (() if other == 0 else (Fraction(other),))
        if isinstance(other, Scalar):
            if other.field != self.field:
                return self.is_rational_value() and other.is_rational_value() and \
                    self.rational_value() == other.rational_value()
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.rational_value())
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        a = self.field.gen_name
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*{a}" if c != 1 else a)
            else:
                parts.append(f"{c}*{a}^{i}" if c != 1 else f"{a}^{i}")
        return " + ".join(parts)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _poly_trim(out)


def parse_rational(text) -> Fraction:
    """Parse "p/q" or integer-like strings into an exact Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if isinstance(text, str):
        return Fraction(text.strip())
    raise FieldError(f"cannot parse rational from {text!r}")
