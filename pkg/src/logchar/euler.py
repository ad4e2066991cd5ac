"""Euler characteristics: curve and surface formulas, intersection evaluation,
and the brute-force curve cohomology oracle.

Sign convention: the degree-n evaluation carries the factor (-1)^n, which is
pinned by the curve formula rank * chi(U) - sum of irregularities and by the
surface formula; topology-derived Chern numbers use
deg c_n = (-1)^n chi(U) and deg(c_1 . D_j) = -chi(D_j^o).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .cycles import LogCycle
from .field import Scalar
from .laurent import LaurentPolynomial


class IntegralityError(AssertionError):
    pass


class GeometryError(ValueError):
    pass


class WindowError(ArithmeticError):
    pass


def integrality_check(value) -> int:
    """Assert the exact rational value is an integer and return it."""
    q = Fraction(value)
    if q.denominator != 1:
        raise IntegralityError(f"expected an integer, got {q}")
    return q.numerator


@dataclass(frozen=True)
class Curve:
    genus: int
    punctures: Tuple[Tuple[str, Tuple[Fraction, ...]], ...]  # (name, irregularities)

    @property
    def chi_U(self):
        return 2 - 2 * self.genus - len(self.punctures)

    @property
    def n(self):
        return 1


@dataclass(frozen=True)
class Surface:
    chi_U: int
    components: Tuple[Tuple[str, int], ...]         # (name, chi of the open part)
    intersections: Tuple[Tuple[int, ...], ...]      # symmetric, with self-intersections

    def __post_init__(self):
        k = len(self.components)
        if len(self.intersections) != k or any(len(r) != k for r in self.intersections):
            raise GeometryError("intersection matrix size must match the divisor count")
        for i in range(k):
            for j in range(k):
                if self.intersections[i][j] != self.intersections[j][i]:
                    raise GeometryError("intersection matrix must be symmetric")

    @property
    def n(self):
        return 2

    def index_of(self, name: str) -> int:
        for i, (nm, _) in enumerate(self.components):
            if nm == name:
                return i
        raise GeometryError(f"unknown divisor component {name}")


@dataclass(frozen=True)
class ChernData:
    """Surface Chern numbers of the log cotangent bundle."""
    c2: Fraction
    c1_dot_D: Tuple[Fraction, ...]
    derived_from_topology: bool = False

    @classmethod
    def from_topology(cls, geom: Surface) -> "ChernData":
        return cls(Fraction(geom.chi_U),
                   tuple(Fraction(-chi) for _, chi in geom.components), True)


def chi_curve(rank: int, geom: Curve) -> int:
    """rank * chi(U) minus the total irregularity over the punctures."""
    total = Fraction(rank * geom.chi_U)
    for name, irrs in geom.punctures:
        local = sum(Fraction(v) for v in irrs)
        if local < 0:
            raise GeometryError(f"negative irregularity at {name}")
        if local.denominator != 1:
            raise IntegralityError(f"non-integral total irregularity at {name}: {local}")
        total -= local
    return integrality_check(total)


def chi_surface_kato(rows: Sequence[Tuple[int, Sequence[Fraction]]],
                     geom: Surface) -> int:
    """Surface formula: per irregularity row,
    chi(U) - sum_j b_j chi(D_j^o) + sum_{j,j'} b_j b_j' (D_j . D_j').

    rows are (rank, b-vector) pairs; the rank expands a summand into that
    many identical rows.
    """
    k = len(geom.components)
    total = Fraction(0)
    for rank, row in rows:
        row = [Fraction(b) for b in row]
        if len(row) != k:
            raise GeometryError("row length must match the divisor count")
        val = Fraction(geom.chi_U)
        for j, b in enumerate(row):
            val -= b * geom.components[j][1]
        for j in range(k):
            for jp in range(k):
                val += row[j] * row[jp] * geom.intersections[j][jp]
        total += rank * val
    return integrality_check(total)


def chi_EP(rows: Sequence[Tuple[int, Sequence[Fraction]]], geom,
           chern: Optional[ChernData] = None) -> int:
    """Chern-class evaluation (-1)^n sum_i deg(c(Omega^1(log D)) (1 - R_i)^{-1}).

    Implemented for curves (n = 1) and surfaces (n = 2); the expansion
    truncates at degree n, so each row contributes
    deg c_1 + deg R_i on a curve and deg c_2 + deg(c_1 . R_i) + deg(R_i^2)
    on a surface.
    """
    if geom.n == 1:
        c1 = Fraction(-geom.chi_U)
        total = Fraction(0)
        for rank, row in rows:
            deg_R = sum(Fraction(b) for b in row)
            total += rank * (c1 + deg_R)
        return integrality_check(-total)
    if geom.n == 2:
        if chern is None:
            chern = ChernData.from_topology(geom)
        k = len(geom.components)
        total = Fraction(0)
        for rank, row in rows:
            row = [Fraction(b) for b in row]
            if len(row) != k:
                raise GeometryError("row length must match the divisor count")
            val = Fraction(chern.c2)
            for j, b in enumerate(row):
                val += b * chern.c1_dot_D[j]
            for j in range(k):
                for jp in range(k):
                    val += row[j] * row[jp] * geom.intersections[j][jp]
            total += rank * val
        return integrality_check(total)
    raise GeometryError("Chern-class evaluation implemented for n <= 2 only")


def kashiwara_dubson(cycle: LogCycle, geom, chern: Optional[ChernData] = None) -> int:
    """(-1)^n deg([X], cycle) in the log cotangent bundle.

    The zero-section self-intersection contributes deg c_n per unit of
    multiplicity; a line over D_j contributes, per unit, its cover degree
    times 1 on a curve, and times deg(c_1 . D_j) + (R . D_j) on a surface,
    which needs the line's irregularity-row annotation.  Lower-dimensional
    components contribute zero.
    """
    n = geom.n
    d = cycle.zero_section_multiplicity()
    if n == 1:
        total = d * Fraction(-geom.chi_U)
        for line, mult in cycle.lines():
            total += mult * line.cover_degree
        return integrality_check(-total)
    if n == 2:
        if chern is None:
            chern = ChernData.from_topology(geom)
        total = d * Fraction(chern.c2)
        for line, mult in cycle.lines():
            j = geom.index_of(line.divisor)
            if line.row is None:
                raise GeometryError(
                    "surface evaluation needs the irregularity row on each line")
            val = Fraction(chern.c1_dot_D[j])
            for jp, b in enumerate(line.row):
                val += Fraction(b) * geom.intersections[j][jp]
            total += mult * line.cover_degree * val
        return integrality_check(total)
    raise GeometryError("intersection evaluation implemented for n <= 2 only")


# -- brute-force de Rham oracle on the punctured line --------------------------


@dataclass(frozen=True)
class OracleCertificate:
    chi: int
    kernel_dim: int
    cokernel_dim: int
    window: int
    recheck_window: int


def derham_oracle_curve(phi: LaurentPolynomial, window: int,
                        _recheck: bool = True):
    """Euler characteristic of the twist by phi on the punctured affine line.

    Computes kernel and cokernel of f -> f' + phi' f on the span of x^i,
    |i| <= window, against the full reachable target span, by exact Gaussian
    elimination; outside the window the map is triangular with invertible
    leading terms, so the dimensions stabilize.  Stability is asserted by
    recomputing at window + 3.
    """
    if len(phi.vars) != 1:
        raise GeometryError("the oracle works on one-variable twists")
    pole0 = max(0, -(phi.min_exponent(0) or 0))
    pole_inf = max(0, (phi.max_exponent(0) or 0))
    need = 2 * max(pole0, pole_inf) + 5
    if window < need:
        raise WindowError(f"window {window} below the stable bound {need}")
    dphi = phi.partial(0)
    shifts = sorted({e[0] for e in dphi.terms} | {-1})
    s_lo, s_hi = min(shifts), max(shifts)
    cols = list(range(-window, window + 1))
    rows = list(range(-window + s_lo, window + s_hi + 1))
    row_index = {e: i for i, e in enumerate(rows)}
    mat = [[Fraction(0)] * len(cols) for _ in rows]
    for cidx, i in enumerate(cols):
        if i != 0:
            mat[row_index[i - 1]][cidx] += i
        for e, c in dphi.terms.items():
            mat[row_index[i + e[0]]][cidx] += _as_fraction(c)
    rank = _rank(mat)
    ker = len(cols) - rank
    coker = len(rows) - rank
    chi = ker - coker
    if _recheck:
        again = derham_oracle_curve(phi, window + 3, _recheck=False)
        if (again.kernel_dim, again.cokernel_dim) != (ker, coker):
            raise WindowError(
                f"window instability: ({ker}, {coker}) at {window} vs "
                f"({again.kernel_dim}, {again.cokernel_dim}) at {window + 3}")
        return OracleCertificate(chi, ker, coker, window, window + 3)
    return OracleCertificate(chi, ker, coker, window, window)


def _as_fraction(c):
    if isinstance(c, Scalar):
        return c.rational_value()
    return Fraction(c)


def _rank(mat):
    m = [row[:] for row in mat]
    nrows, ncols = len(m), len(m[0]) if m else 0
    rank = 0
    rowpos = 0
    for col in range(ncols):
        pivot = None
        for r in range(rowpos, nrows):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        m[rowpos], m[pivot] = m[pivot], m[rowpos]
        inv = Fraction(1) / m[rowpos][col]
        m[rowpos] = [x * inv for x in m[rowpos]]
        for r in range(nrows):
            if r != rowpos and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rowpos])]
        rank += 1
        rowpos += 1
        if rowpos == nrows:
            break
    return rank
