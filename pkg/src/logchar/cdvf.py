"""One-variable engine over k((t)): operators, Newton polygons, refined data.

Conventions.  A DiffOperator is monic of order d with coefficients c_1..c_d,
either in the derivation d/dt ("d/dt" gauge) or in the logarithmic derivation
t d/dt ("t*d/dt" gauge).  Gauge changes use the exact identities
t^k (d/dt)^k = D(D-1)..(D-k+1) for D = t d/dt, so only constant-coefficient
Stirling data enters.

The Newton polygon lives on the points (i, v(c_i)) of the log gauge, lower
convex hull from (0, 0).  A face of slope sigma and width w contributes the
irregularity max(0, -sigma) with multiplicity w; faces beyond the last finite
point contribute zeros.  This normalization is pinned by the rank-1 twist
attached to t^{-b} (irregularity b) and by Euler operators (irregularity 0).

Refined residues along a face of positive slope b are face polynomials of the
monic annihilator: their roots are the leading twisted eigenvalues theta, the
reductions of t^{b+1} phi' for a rank-1 twist by phi.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .cycles import ChartStamp, Direction, DivisorLine, LogCycle, ZeroSection, CycleError
from .field import QQ, Scalar, _poly_divmod, _rational_roots, _is_square_fraction
from .laurent import LaurentPolynomial
from .series import LaurentSeries, PrecisionError

GAUGE_PARTIAL = "d/dt"
GAUGE_LOG = "t*d/dt"


class OperatorError(ValueError):
    pass


class FactorizationError(ValueError):
    pass


class DiffOperator:
    """Monic operator of order d; coeffs[i] is the coefficient of the
    (d-1-i)-th power of the derivation, i.e. c_1 first."""

    __slots__ = ("gauge", "order", "coeffs", "var", "field")

    def __init__(self, gauge: str, coeffs: Sequence[LaurentSeries], var: str = "t",
                 field=QQ):
        if gauge not in (GAUGE_PARTIAL, GAUGE_LOG):
            raise OperatorError(f"unknown gauge {gauge!r}")
        cs = []
        for c in coeffs:
            if not isinstance(c, LaurentSeries):
                c = LaurentSeries.constant(c, var, field)
            cs.append(c)
        object.__setattr__(self, "gauge", gauge)
        object.__setattr__(self, "order", len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "field", field)

    def __setattr__(self, *a):
        raise AttributeError("DiffOperator is immutable")

    def __repr__(self):
        sym = "d" if self.gauge == GAUGE_PARTIAL else "D"
        parts = [f"{sym}^{self.order}"]
        for i, c in enumerate(self.coeffs, start=1):
            parts.append(f"({c})*{sym}^{self.order - i}")
        return " + ".join(parts)

    def coefficient_of_power(self, k: int) -> LaurentSeries:
        """Coefficient of the k-th power of the derivation, with c_0 = 1."""
        if k == self.order:
            return LaurentSeries.constant(1, self.var, self.field)
        return self.coeffs[self.order - 1 - k]

    def to_log_gauge(self) -> "DiffOperator":
        if self.gauge == GAUGE_LOG:
            return self
        d = self.order
        stir1 = _signed_stirling_first(d)
        # sum_i c_i t^{i} * falling_factorial_{d-i}(D), already multiplied by t^d
        acc = [LaurentSeries.zero(self.var, self.field) for _ in range(d + 1)]
        for i in range(d + 1):
            c_i = self.coefficient_of_power(d - i)  # c_0 = 1, then c_1..c_d
            factor = c_i.shift(i)
            k = d - i
            for j in range(k + 1):
                s = stir1[k][j]
                if s:
                    acc[j] = acc[j] + factor * s
        # acc[d] = t^d * t^{-d} = 1 exactly
        coeffs = [acc[d - i] for i in range(1, d + 1)]
        return DiffOperator(GAUGE_LOG, coeffs, self.var, self.field)

    def to_partial_gauge(self) -> "DiffOperator":
        if self.gauge == GAUGE_PARTIAL:
            return self
        d = self.order
        stir2 = _stirling_second(d)
        acc = [LaurentSeries.zero(self.var, self.field) for _ in range(d + 1)]
        for i in range(d + 1):
            c_i = self.coefficient_of_power(d - i)
            k = d - i
            for j in range(k + 1):
                s = stir2[k][j]
                if s:
                    acc[j] = acc[j] + (c_i * s).shift(j)
        coeffs = [acc[d - i].shift(-d) for i in range(1, d + 1)]
        return DiffOperator(GAUGE_PARTIAL, coeffs, self.var, self.field)

    def kummer(self, h: int) -> "DiffOperator":
        """Substitute t -> t^h in log gauge: coefficients pull back and the
        log derivation rescales by 1/h, so c_i picks up h^i."""
        if h < 1:
            raise OperatorError("cover degree must be positive")
        if h == 1:
            return self.to_log_gauge()
        op = self.to_log_gauge()
        coeffs = [c.substitute_power(h) * (h ** i)
                  for i, c in enumerate(op.coeffs, start=1)]
        return DiffOperator(GAUGE_LOG, coeffs, self.var, self.field)

    def rescale(self, c) -> "DiffOperator":
        """Substitute t -> c t (gauge covariant in the log gauge)."""
        op = self.to_log_gauge()
        return DiffOperator(GAUGE_LOG, [s.rescale(c) for s in op.coeffs], self.var,
                            self.field)


def _signed_stirling_first(n):
    """table[k][j]: coefficient of D^j in D(D-1)...(D-k+1)."""
    table = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    table[0][0] = Fraction(1)
    for k in range(1, n + 1):
        for j in range(n + 1):
            table[k][j] = (table[k - 1][j - 1] if j else Fraction(0)) \
                - (k - 1) * table[k - 1][j]
    return table


def _stirling_second(n):
    """table[k][j]: coefficient of t^j (d/dt)^j in D^k."""
    table = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    table[0][0] = Fraction(1)
    for k in range(1, n + 1):
        for j in range(n + 1):
            table[k][j] = (table[k - 1][j - 1] if j else Fraction(0)) \
                + j * table[k - 1][j]
    return table


# -- Newton polygon ----------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: Tuple[Tuple[int, Fraction], ...]
    slopes: Tuple[Tuple[Fraction, int], ...]          # (slope, width), +inf tail omitted
    irregularities: Tuple[Tuple[Fraction, int], ...]  # (value, multiplicity), sorted desc
    order: int

    @property
    def total_irregularity(self) -> Fraction:
        return sum(v * m for v, m in self.irregularities)

    def irregularity_multiset(self):
        out = []
        for v, m in self.irregularities:
            out.extend([v] * m)
        return tuple(sorted(out, reverse=True))


def newton_polygon(op: DiffOperator) -> NewtonPolygon:
    """Polygon, slopes and subsidiary irregularities of a monic operator.

    Every coefficient must either be exactly zero or carry a certified
    valuation; an all-zero coefficient at finite precision is accepted only
    when its precision bound already lies above the hull.
    """
    logop = op.to_log_gauge()
    d = logop.order
    points = [(0, Fraction(0))]
    uncertain = []
    for i in range(1, d + 1):
        c = logop.coeffs[i - 1]
        try:
            v = c.valuation()
        except PrecisionError:
            uncertain.append((i, Fraction(c.prec)))
            continue
        if v is None:
            continue  # exactly zero: no point
        points.append((i, Fraction(v)))
    hull = _lower_hull(points)
    for i, bound in uncertain:
        if _hull_height(hull, i, d) > bound:
            raise PrecisionError(
                f"coefficient {i} is zero to O(t^{bound}) but the polygon needs it")
    slopes = []
    irregularities = {}
    for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
        sigma = (v1 - v0) / (i1 - i0)
        width = i1 - i0
        slopes.append((sigma, width))
        irr = max(Fraction(0), -sigma)
        irregularities[irr] = irregularities.get(irr, 0) + width
    tail = d - hull[-1][0]
    if tail:
        irregularities[Fraction(0)] = irregularities.get(Fraction(0), 0) + tail
    irr_sorted = tuple(sorted(irregularities.items(), reverse=True))
    poly = NewtonPolygon(tuple(hull), tuple(slopes), irr_sorted, d)
    if poly.total_irregularity.denominator != 1:
        raise OperatorError(f"total irregularity {poly.total_irregularity} is not an integer")
    return poly


def _lower_hull(points):
    pts = sorted(points)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> p
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _hull_height(hull, i, d):
    """Height below which a point at abscissa i would change the irregularities.

    Between vertices this is the hull itself; past the last vertex any point
    at or above the last height only adds nonnegative-slope tail faces, which
    carry zero irregularity.
    """
    if i <= hull[-1][0]:
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= i <= x2:
                return y1 + (y2 - y1) * Fraction(i - x1, x2 - x1)
        return hull[0][1]
    return hull[-1][1]


# -- refined residues --------------------------------------------------------


@dataclass(frozen=True)
class OrbitClass:
    factors: Tuple[Tuple[Fraction, ...], ...]  # monic irreducibles, descending coeffs
    multiplicity: int                          # multiplicity of each factor inside q
    residue_degree: int                        # Galois orbit size in the residue field
    dimension: int                             # number of roots in the class, counted

    def describe(self):
        return (f"orbit r={self.residue_degree} dim={self.dimension} "
                f"factors={[_poly_str(f) for f in self.factors]}")


@dataclass(frozen=True)
class RefinedClass:
    slope: Fraction
    kummer: int
    residue_poly: Tuple[Fraction, ...]  # monic, descending coefficients
    orbits: Tuple[OrbitClass, ...]

    def theta_values(self):
        """Rational roots of the residue polynomial (size-1 orbits)."""
        out = []
        for orb in self.orbits:
            for f in orb.factors:
                if len(f) == 2:
                    out.extend([-f[1]] * orb.multiplicity)
        return sorted(out)


def _poly_str(coeffs):
    deg = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        p = deg - i
        mono = "X" if p == 1 else (f"X^{p}" if p else "")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    sign0, body0 = parts[0]
    out = ("-" if sign0 == "-" else "") + body0
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def refined_residue(op: DiffOperator, b: Fraction,
                    factorization: Optional[Sequence[Tuple[Sequence[Fraction], int]]] = None
                    ) -> RefinedClass:
    """Residue polynomial along the irregularity-b face, with orbit data.

    The operator is moved to the log gauge and, for fractional b, pulled back
    along t -> t^h with h the denominator of b.  The face polynomial of the
    monic annihilator has the leading twisted eigenvalues as roots.
    """
    b = Fraction(b)
    if b <= 0:
        raise OperatorError("refined residues require a positive slope")
    poly = newton_polygon(op)
    if not any(v == b and m > 0 for v, m in poly.irregularities):
        raise OperatorError(f"{b} is not an irregularity slope of the operator")
    h = b.denominator
    logop = op.kummer(h)
    B = int(b * h)
    cover_poly = newton_polygon(logop)
    hull = cover_poly.vertices
    target = Fraction(-B)
    face = None
    for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
        if (v1 - v0) / (i1 - i0) == target:
            face = (i0, v0, i1, v1)
            break
    if face is None:
        raise OperatorError("face not found on the cover polygon")
    i0, v0, i1, v1 = face
    w = i1 - i0
    qs = []
    for l in range(w + 1):
        i = i0 + l
        c = logop.coefficient_of_power(logop.order - i)
        want = int(v0 - B * l)
        qs.append(_series_coeff(c, want))
    lead = qs[0]
    if lead == 0:
        raise OperatorError("face leading coefficient vanished")
    q = tuple(Fraction(x) / Fraction(lead) for x in qs)
    if q[-1] == 0:
        raise OperatorError("residue polynomial vanishes at 0 on a positive slope")
    if factorization is not None:
        factors = [(tuple(Fraction(c) for c in f), int(m)) for f, m in factorization]
        _verify_factorization(q, factors)
    else:
        factors = factor_rational(q)
    orbits = _orbit_classes(factors, h, B)
    return RefinedClass(b, h, q, tuple(orbits))


def _series_coeff(c: LaurentSeries, e: int) -> Fraction:
    try:
        s = c.coefficient(e)
    except PrecisionError:
        raise PrecisionError(f"face coefficient at t^{e} beyond known precision")
    if isinstance(s, Scalar):
        return s.rational_value()
    return Fraction(s)


def _verify_factorization(q, factors):
    prod = [Fraction(1)]
    for f, m in factors:
        for _ in range(m):
            prod = _poly_mul_desc(prod, list(f))
    if tuple(prod) != tuple(q):
        raise FactorizationError("supplied factorization does not multiply back to q")


def _poly_mul_desc(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def factor_rational(q: Sequence[Fraction]):
    """Factor a monic rational polynomial into irreducibles (degree <= 4).

    Input and output use descending coefficients.  Raises FactorizationError
    when an irreducible factor of degree > 4 would be required.
    """
    q = [Fraction(c) for c in q]
    if q[0] != 1:
        raise FactorizationError("polynomial must be monic")
    factors = {}

    def add(f):
        factors[tuple(f)] = factors.get(tuple(f), 0) + 1

    rest = list(q)
    # peel rational roots with multiplicity
    while len(rest) > 1:
        asc = list(reversed(rest))
        roots = _rational_roots(asc)
        if not roots:
            break
        r = roots[0]
        add([Fraction(1), -r])
        quot, rem = _poly_divmod(asc, [-r, Fraction(1)])
        assert not rem
        rest = list(reversed(quot))
        rest = [c / rest[0] for c in rest]
    deg = len(rest) - 1
    if deg == 0:
        return sorted(factors.items())
    if deg == 1:
        add(rest)
        return sorted(factors.items())
    if deg == 2:
        a, b, c = rest
        disc = b * b - 4 * a * c
        root = _is_square_fraction(disc)
        if root is None:
            add(rest)
        else:
            r1 = (-b + root) / 2
            r2 = (-b - root) / 2
            add([Fraction(1), -r1])
            add([Fraction(1), -r2])
        return sorted(factors.items())
    if deg == 3:
        add(rest)  # no rational root: irreducible
        return sorted(factors.items())
    if deg == 4:
        split = _quartic_into_quadratics(rest)
        if split is None:
            add(rest)
            return sorted(factors.items())
        for quad in split:
            for f, m in factor_rational(quad):
                for _ in range(m):
                    add(list(f))
        return sorted(factors.items())
    raise FactorizationError(
        f"irreducible factorization beyond degree 4 (degree {deg}) requires "
        "a user-supplied orbit decomposition")


def _quartic_into_quadratics(rest):
    one, a, b, c, d = rest
    assert one == 1
    p = b - 3 * a * a / 4
    q = c - a * b / 2 + a ** 3 / 8
    r = d - a * c / 4 + a * a * b / 16 - 3 * a ** 4 / 256
    res = [-q * q, p * p - 4 * r, 2 * p, Fraction(1)]  # ascending in z = s^2
    for z in _rational_roots(res):
        if z < 0:
            continue
        s = _is_square_fraction(z)
        if s is None:
            continue
        if s == 0:
            disc = _is_square_fraction(p * p - 4 * r)
            if disc is None:
                continue
            u = (p + disc) / 2
            v = (p - disc) / 2
        else:
            u = (p + z + q / s) / 2
            v = (p + z - q / s) / 2
        # (y^2 + s y + u)(y^2 - s y + v) with y = x + a/4
        f1 = _compose_shift([Fraction(1), s, u], a / 4)
        f2 = _compose_shift([Fraction(1), -s, v], a / 4)
        if _poly_mul_desc(f1, f2) == rest:
            return f1, f2
    return None


def _compose_shift(desc, shift):
    """f(x + shift) for descending coefficients, by Horner."""
    out = [Fraction(desc[0])]
    for c in desc[1:]:
        out = _poly_mul_desc(out, [Fraction(1), Fraction(shift)])
        out[-1] += Fraction(c)
    return out


def _orbit_classes(factors, h: int, B: int):
    """Group irreducible factors into Galois-orbit classes.

    The residue-field Galois orbit of a factor is the factor itself (size =
    degree).  For a degree-2 cover the ramified part scales roots by -1 and
    pairs a factor with its sign twist; larger covers with a nontrivial
    scaling are not supported without a user-supplied decomposition.
    """
    items = [list(f) for f, _ in factors]
    mults = [m for _, m in factors]
    n = len(items)
    if h == 1 or B % h == 0:
        pairing = list(range(n))
    elif h == 2:
        pairing = []
        for f in items:
            g = [c * ((-1) ** i) for i, c in enumerate(f)]
            try:
                pairing.append(items.index(g))
            except ValueError:
                raise FactorizationError("face polynomial is not stable under the cover twist")
        if any(mults[i] != mults[pairing[i]] for i in range(n)):
            raise FactorizationError("cover twist does not preserve multiplicities")
    else:
        raise FactorizationError(
            f"orbit grouping for cover degree {h} needs a user-supplied decomposition")
    seen = [False] * n
    orbits = []
    for i in range(n):
        if seen[i]:
            continue
        cls = [i]
        seen[i] = True
        j = pairing[i]
        if j != i and not seen[j]:
            cls.append(j)
            seen[j] = True
        deg = len(items[i]) - 1
        dim = sum((len(items[k]) - 1) * mults[k] for k in cls)
        orbits.append(OrbitClass(tuple(tuple(items[k]) for k in cls), mults[cls[0]],
                                 deg, dim))
    return orbits


def orbit_integrality_violations(refined: RefinedClass):
    """Hasse-Arf style check: (dimension * slope) / r must be integral."""
    bad = []
    for orb in refined.orbits:
        val = Fraction(orb.dimension) * refined.slope / orb.residue_degree
        if val.denominator != 1:
            bad.append((orb, val))
    return bad


# -- cyclic vectors ----------------------------------------------------------


def _mat_vec(A, v):
    n = len(v)
    return [sum((A[i][j] * v[j] for j in range(n)),
                LaurentSeries.zero(v[0].var, v[0].field)) for i in range(n)]


def _apply_derivation(A, v):
    """d/dt on coordinates: v' + A v."""
    return [vi.derivative() + wi for vi, wi in zip(v, _mat_vec(A, v))]


def _det(mat):
    n = len(mat)
    zero = LaurentSeries.zero(mat[0][0].var, mat[0][0].field)
    total = zero
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = LaurentSeries.constant(sign, mat[0][0].var, mat[0][0].field)
        for i in range(n):
            term = term * mat[i][perm[i]]
        total = total + term
    return total


def cyclic_vector(A, var: str = "t", field=QQ) -> DiffOperator:
    """Monic annihilator of a cyclic vector of the connection matrix A.

    A is the matrix of the derivation d/dt on a chosen basis (d <= 4).  The
    deterministic candidates are e_1, e_1 + t e_2, e_1 + t e_2 + t^2 e_3, ...,
    accepted when the derivative matrix has a certified unit determinant.
    """
    d = len(A)
    if d > 4:
        raise OperatorError("cyclic vectors implemented for rank <= 4")
    A = [[c if isinstance(c, LaurentSeries) else LaurentSeries.constant(c, var, field)
          for c in row] for row in A]
    zero = LaurentSeries.zero(var, field)
    one = LaurentSeries.constant(1, var, field)
    for ncand in range(1, d + 1):
        v = [LaurentSeries.monomial(k, 1, var, field) if k < ncand else zero
             for k in range(d)]
        iterates = [v]
        for _ in range(d):
            iterates.append(_apply_derivation(A, iterates[-1]))
        W = [[iterates[j][i] for j in range(d)] for i in range(d)]
        det = _det(W)
        try:
            det.valuation()
        except PrecisionError:
            continue
        if det.is_exactly_zero:
            continue
        # Cramer: solve W u = iterates[d]
        rhs = iterates[d]
        det_inv = det.inverse()
        coeffs = []
        for j in range(d):
            Wj = [[W[i][k] if k != j else rhs[i] for k in range(d)] for i in range(d)]
            coeffs.append(_det(Wj) * det_inv)
        # annihilator: partial^d - sum_j u_j partial^j
        cs = [-coeffs[d - 1 - i] for i in range(d)]
        return DiffOperator(GAUGE_PARTIAL, cs, var, field)
    raise OperatorError("no deterministic candidate is cyclic at the working precision")


def companion_matrix(op: DiffOperator):
    """Matrix of d/dt on the basis v, v', .., v^{(d-1)} of the cyclic module."""
    p = op.to_partial_gauge()
    d = p.order
    var, field = p.var, p.field
    zero = LaurentSeries.zero(var, field)
    one = LaurentSeries.constant(1, var, field)
    A = [[zero for _ in range(d)] for _ in range(d)]
    for j in range(d - 1):
        A[j + 1][j] = one
    for i in range(d):
        A[i][d - 1] = -p.coeffs[d - 1 - i]
    return A


# -- rank-1 local data -------------------------------------------------------


def rank1_operator(phi_series: LaurentSeries) -> DiffOperator:
    """Annihilator d/dt - phi' of the rank-1 twist attached to phi."""
    return DiffOperator(GAUGE_PARTIAL, [-phi_series.derivative()], phi_series.var,
                        phi_series.field)


def theta_relation_check(phi: LaurentPolynomial, cdvf_var: int = 0) -> bool:
    """Compatibility of the refined coefficients of a rank-1 class d(phi).

    With b the pole order along the distinguished variable and theta_j the
    reduction of t^b x_j d_j(phi) in the all-log basis, checks
    b * theta_j = -x_j d_j(theta_1) for every j distinct from the
    distinguished one.
    """
    n = len(phi.vars)
    j0 = cdvf_var
    m = phi.min_exponent(j0)
    if m is None or m >= 0:
        raise OperatorError("phi must have a pole along the distinguished variable")
    b = -m
    tb = [0] * n
    tb[j0] = b
    tpow = LaurentPolynomial.monomial(phi.vars, tb, 1, phi.field)
    thetas = []
    for j in range(n):
        theta = (tpow * phi.log_partial(j)).restrict_to_zero(j0)
        thetas.append(theta)
    theta1 = thetas[j0]
    for j in range(n):
        if j == j0:
            continue
        if thetas[j] * b != -theta1.log_partial(j):
            return False
    return True


def local_zcar_rank1(phi: LaurentPolynomial, rank: int, chart_vars: Sequence[str],
                     cdvf_var_name: Optional[str] = None) -> LogCycle:
    """Cycle of a rank-1 twist with regular padding over a one-divisor chart.

    The distinguished variable is the only log direction; basis
    dt/t, dx_2, .., dx_n.  Yields rank * [X] plus, for a pole of order b > 0,
    the line with direction (theta_1, .., theta_n) and multiplicity rank * b.
    """
    vars = tuple(chart_vars)
    name = cdvf_var_name if cdvf_var_name is not None else vars[0]
    j0 = vars.index(name)
    chart = ChartStamp(vars, (name,))
    if rank < 1:
        raise OperatorError("rank must be positive")
    m = phi.min_exponent(j0)
    b = -(m if m is not None else 0)
    parts = [(ZeroSection(), Fraction(rank))]
    if b > 0:
        tb = [0] * len(vars)
        tb[j0] = b
        tpow = LaurentPolynomial.monomial(vars, tb, 1, phi.field)
        entries = []
        for j in range(len(vars)):
            deriv = phi.log_partial(j) if j == j0 else phi.partial(j)
            entries.append((tpow * deriv).restrict_to_zero(j0))
        if entries[j0].is_zero:
            raise CycleError("leading refined coefficient vanished for a positive slope")
        parts.append((DivisorLine(name, Direction(entries), 1, (Fraction(b),)),
                      Fraction(rank * b)))
    return LogCycle(chart, parts).finalize()


# -- brute-force radius oracle -----------------------------------------------


def radius_oracle(A, s_max: int = 40, var: str = "t", field=QQ):
    """Interval bracketing the largest irregularity, by iterating d/dt.

    Exact iteration of the derivation on a basis; the growth rate of the
    pole order of the s-th iterate approaches (largest irregularity) + 1.
    Only meant as an independent test oracle (rank <= 2).
    """
    d = len(A)
    if d > 2:
        raise OperatorError("radius oracle implemented for rank <= 2")
    if s_max < 10:
        raise OperatorError("s_max must be at least 10")
    A = [[c if isinstance(c, LaurentSeries) else LaurentSeries.constant(c, var, field)
          for c in row] for row in A]
    if any(not c.is_exact for row in A for c in row):
        raise PrecisionError("oracle needs exact matrix entries")
    M = [[LaurentSeries.constant(1 if i == j else 0, var, field) for j in range(d)]
         for i in range(d)]
    samples = []
    for s in range(1, s_max + 1):
        M = [[M[i][j].derivative() + sum((A[i][k] * M[k][j] for k in range(d)),
                                         LaurentSeries.zero(var, field))
              for j in range(d)] for i in range(d)]
        vals = [c.valuation() for row in M for c in row if not c.is_exactly_zero]
        # the derivation on the base field alone already grows like t^{-s}
        pole = max(-min(vals), s) if vals else s
        if s >= s_max - 8:
            samples.append(Fraction(pole, s) - 1)
    slack = Fraction(3, s_max)
    return (min(samples) - slack, max(samples) + slack)
