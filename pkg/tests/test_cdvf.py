import random
from fractions import Fraction

import pytest

from logchar.cdvf import (
    GAUGE_LOG,
    GAUGE_PARTIAL,
    DiffOperator,
    FactorizationError,
    OperatorError,
    companion_matrix,
    cyclic_vector,
    factor_rational,
    local_zcar_rank1,
    newton_polygon,
    orbit_integrality_violations,
    radius_oracle,
    rank1_operator,
    refined_residue,
    theta_relation_check,
)
from logchar.laurent import LaurentPolynomial
from logchar.series import LaurentSeries, PrecisionError

S = LaurentSeries
L = LaurentPolynomial
F = Fraction


def op_partial(*coeff_dicts):
    return DiffOperator(GAUGE_PARTIAL, [S("t", d) for d in coeff_dicts])


def E_phi(exp, coeff=1):
    """Annihilator of the rank-1 twist attached to phi = coeff * t^exp."""
    return rank1_operator(S("t", {exp: coeff}))


def irr(op):
    return newton_polygon(op).irregularity_multiset()


def test_polygon_euler_operator_regular():
    # d/dt - a/t: regular
    assert irr(op_partial({-1: F(-5, 3)})) == (0,)
    assert irr(op_partial({-1: 2})) == (0,)


def test_polygon_rank1_twists():
    # the twist by t^{-2} is annihilated by d/dt + 2 t^{-3}
    assert irr(E_phi(-2)) == (2,)
    assert E_phi(-2).coeffs[0].terms == {-3: 2}
    assert irr(op_partial({-3: 2})) == (2,)
    for b in range(1, 7):
        assert irr(E_phi(-b)) == (b,)


def test_polygon_half_slope():
    p = op_partial({}, {-3: -1})  # d^2 - t^-3
    poly = newton_polygon(p)
    assert poly.irregularity_multiset() == (F(1, 2), F(1, 2))
    assert poly.total_irregularity == 1


def test_polygon_gauge_conversion_round_trip():
    p = op_partial({-3: 2, 0: 1}, {-1: 5})
    q = p.to_log_gauge().to_partial_gauge()
    for a, b in zip(p.coeffs, q.coeffs):
        assert a.agrees_with(b)
    assert irr(p) == irr(p.to_log_gauge())


def test_polygon_gauge_invariance_rescale():
    rng = random.Random(2)
    for _ in range(20):
        coeffs = []
        for _ in range(rng.randint(1, 3)):
            coeffs.append({e: rng.randint(-4, 4)
                           for e in range(-4, 2) if rng.random() < 0.4})
        p = op_partial(*coeffs)
        try:
            base = irr(p)
        except OperatorError:
            continue
        for c in (2, F(1, 3), -1):
            assert irr(p.rescale(c)) == base


def test_polygon_total_integrality_random():
    rng = random.Random(9)
    for _ in range(100):
        d = rng.randint(1, 4)
        coeffs = []
        for _ in range(d):
            coeffs.append({e: rng.randint(-5, 5)
                           for e in range(-5, 3) if rng.random() < 0.5})
        poly = newton_polygon(op_partial(*coeffs))
        assert poly.total_irregularity.denominator == 1
        assert all(v >= 0 for v, _ in poly.irregularities)
        assert sum(m for _, m in poly.irregularities) == d


def test_polygon_precision_audit():
    # coefficient zero up to O(t^-5): cannot certify the polygon
    c = S("t", {}, prec=-5)
    with pytest.raises(PrecisionError):
        newton_polygon(DiffOperator(GAUGE_PARTIAL, [c]))
    # zero up to O(t^2): safely above the hull, treated as regular tail
    c2 = S("t", {}, prec=2)
    poly = newton_polygon(DiffOperator(GAUGE_LOG, [c2]))
    assert poly.irregularity_multiset() == (0,)


def test_refined_residue_rank1():
    # twist by t^{-2}: theta_1 = reduction of t^{b+1} phi' = -2
    ref = refined_residue(E_phi(-2), 2)
    assert ref.residue_poly == (1, 2)  # X + 2, root -2
    assert ref.theta_values() == [-2]
    assert len(ref.orbits) == 1
    assert ref.orbits[0].residue_degree == 1
    assert not orbit_integrality_violations(ref)


def test_refined_residue_direct_sum():
    # product annihilator of the twists by t^{-1} and -t^{-1}
    # (d + t^-2)(d - t^-2) = d^2 + (2 t^-3) d ... compute symbolically instead:
    # composition via companion of the product operator
    p1 = E_phi(-1)        # d + t^-2
    p2 = E_phi(-1, -1)    # d - t^-2
    prod = _compose(p1, p2)
    ref = refined_residue(prod, 1)
    assert ref.residue_poly == (1, 0, -1)  # X^2 - 1
    assert sorted(ref.theta_values()) == [-1, 1]
    assert len(ref.orbits) == 2
    assert not orbit_integrality_violations(ref)


def test_refined_residue_kummer():
    ref = refined_residue(op_partial({}, {-3: -1}), F(1, 2))
    assert ref.kummer == 2
    assert ref.residue_poly == (1, 0, -4)  # X^2 - 4 after t -> t^2
    assert sorted(ref.theta_values()) == [-2, 2]
    # the two rational roots are swapped by the cover twist: one class
    assert len(ref.orbits) == 1
    assert ref.orbits[0].dimension == 2
    assert not orbit_integrality_violations(ref)


def test_refined_residue_irrational_orbit():
    # twists by +-sqrt(2)/t descend to X^2 - 2: one orbit of size 2
    # annihilator with q(X) = X^2 - 2: D^2 + c1 D + c2 with face values
    op = DiffOperator(GAUGE_LOG, [S("t", {0: 0}), S("t", {-2: -2})])
    ref = refined_residue(op, 1)
    assert ref.residue_poly == (1, 0, -2)
    assert len(ref.orbits) == 1
    assert ref.orbits[0].residue_degree == 2
    # Hasse-Arf: dim * slope / r = 2 * 1 / 2 = 1
    assert not orbit_integrality_violations(ref)


def test_refined_residue_errors():
    with pytest.raises(OperatorError):
        refined_residue(E_phi(-2), 3)
    with pytest.raises(OperatorError):
        refined_residue(op_partial({-1: 1}), 0)


def test_factor_rational():
    assert factor_rational([1, 0, -1]) == [((F(1), F(-1)), 1), ((F(1), F(1)), 1)]
    assert factor_rational([1, 0, -2]) == [((F(1), F(0), F(-2)), 1)]
    # (X^2+1)^2
    assert factor_rational([1, 0, 2, 0, 1]) == [((F(1), F(0), F(1)), 2)]
    # (X^2 - 2)(X^2 - 3)
    got = factor_rational([1, 0, -5, 0, 6])
    assert sorted(got) == [((F(1), F(0), F(-3)), 1), ((F(1), F(0), F(-2)), 1)]
    # degree five irreducible: refuse
    with pytest.raises(FactorizationError):
        factor_rational([1, 0, 0, 0, 0, -2])


def test_user_supplied_factorization_verified():
    op = DiffOperator(GAUGE_LOG, [S("t", {0: 0}), S("t", {-2: -2})])
    ref = refined_residue(op, 1, factorization=[([1, 0, -2], 1)])
    assert ref.orbits[0].residue_degree == 2
    with pytest.raises(FactorizationError):
        refined_residue(op, 1, factorization=[([1, 0, 2], 1)])


def _compose(p, q):
    """Annihilator of the direct sum as the product operator p . q (rank 2)."""
    # multiply monic operators symbolically in the d/dt gauge
    d1, d2 = p.order, q.order
    # represent p as sum a_k d^k, q as sum b_k d^k with a_d1 = b_d2 = 1
    def coeffs_of(op):
        out = {op.order: S("t", {0: 1})}
        for i, c in enumerate(op.coeffs, start=1):
            out[op.order - i] = c
        return out

    a, b = coeffs_of(p.to_partial_gauge()), coeffs_of(q.to_partial_gauge())
    prod = {}
    for k, ak in a.items():
        # d^k . (b_l d^l): push d through coefficients by Leibniz
        terms = {l: bl for l, bl in b.items()}
        for _ in range(k):
            new = {}
            for l, bl in terms.items():
                new[l + 1] = new.get(l + 1, S.zero()) + bl
                new[l] = new.get(l, S.zero()) + bl.derivative()
            terms = new
        for l, bl in terms.items():
            prod[l] = prod.get(l, S.zero()) + ak * bl
    order = d1 + d2
    cs = [prod.get(order - i, S.zero()) for i in range(1, order + 1)]
    return DiffOperator(GAUGE_PARTIAL, cs)


def test_compose_direct_sum_polygon():
    prod = _compose(E_phi(-1), E_phi(-1, -1))
    assert irr(prod) == (1, 1)
    prod2 = _compose(E_phi(-2), op_partial({-1: F(1, 2)}))
    assert irr(prod2) == (2, 0)


def test_polygon_mixed_slopes_by_hand():
    # d^3 + t^-1 d + t^-5: log-gauge points (0,0), (1,0), (2,0), (3,-2),
    # a single face of slope -2/3
    p = op_partial({-1: 1}, {}, {-5: 1})
    poly = newton_polygon(p)
    assert poly.irregularity_multiset() == (F(2, 3), F(2, 3), F(2, 3))
    assert poly.total_irregularity == 2


def test_polygon_of_products_is_union_random():
    # the polygon of a composition is the Minkowski sum: irregularity
    # multisets are unions; rank-1 factors make an independent oracle
    rng = random.Random(37)
    for _ in range(25):
        b1, b2 = rng.randint(0, 4), rng.randint(0, 4)
        c1, c2 = rng.choice([1, 2, -1]), rng.choice([3, -2, F(1, 2)])
        p = E_phi(-b1, c1) if b1 else op_partial({-1: F(1, 3)})
        q = E_phi(-b2, c2) if b2 else op_partial({-1: F(2, 5)})
        want = tuple(sorted([F(b1), F(b2)], reverse=True))
        assert irr(_compose(p, q)) == want
        assert irr(_compose(q, p)) == want


def test_cyclic_vector_rank1():
    A = [[S("t", {-2: -1})]]  # twist by t^{-1}
    p = cyclic_vector(A)
    assert p.order == 1
    assert p.coeffs[0].agrees_with(S("t", {-2: 1}))
    assert irr(p) == (1,)


def test_cyclic_vector_diagonal_euler():
    A = [[S("t", {0: 0}), S.zero()], [S.zero(), S("t", {-1: F(1, 2)})]]
    p = cyclic_vector(A)
    assert p.order == 2
    assert newton_polygon(p).irregularity_multiset() == (0, 0)


def test_cyclic_vector_companion_round_trip():
    for op in [op_partial({}, {-3: -1}), E_phi(-2), _compose(E_phi(-1), E_phi(-1, -1))]:
        A = companion_matrix(op)
        q = cyclic_vector(A)
        assert newton_polygon(q).irregularity_multiset() == \
            newton_polygon(op).irregularity_multiset()


def test_cyclic_vector_rank3():
    # third-order operator with a single steep slope
    op = op_partial({}, {}, {-4: 1})  # d^3 + t^-4
    A = companion_matrix(op)
    q = cyclic_vector(A)
    assert q.order == 3
    assert newton_polygon(q).irregularity_multiset() == \
        newton_polygon(op).irregularity_multiset()


def test_cyclic_vector_random_conjugation_invariance():
    rng = random.Random(4)
    base = companion_matrix(op_partial({}, {-3: -1}))
    # conjugate by the diagonal unit diag(1, 1 + t): A -> g^-1 A g + g^-1 g'
    g = S("t", {0: 1, 1: 1})
    ginv = g.inverse()
    A = [[base[0][0], base[0][1] * g],
         [ginv * base[1][0], base[1][1] + ginv * g.derivative()]]
    q = cyclic_vector(A)
    assert newton_polygon(q).irregularity_multiset() == (F(1, 2), F(1, 2))


def test_theta_relation_examples():
    # phi = x^-2 y^-3
    phi = L(("x", "y"), {(-2, -3): 1})
    assert theta_relation_check(phi)
    # phi = x^-1: no other variables
    assert theta_relation_check(L(("x",), {(-1,): 1}))
    # phi = 5 x^-3 y
    assert theta_relation_check(L(("x", "y"), {(-3, 1): 5}))
    # sums of monomials with a clean leading part
    assert theta_relation_check(L(("x", "y"), {(-2, -1): 3}))
    with pytest.raises(OperatorError):
        theta_relation_check(L(("x", "y"), {(1, -1): 1}))


def test_local_zcar_rank1_examples():
    # phi = t^-3, rank 1: [X] + 3 * line with direction (-3)
    c = local_zcar_rank1(L(("t",), {(-3,): 1}), 1, ("t",))
    assert c.zero_section_multiplicity() == 1
    (line, mult), = c.lines()
    assert mult == 3
    assert line.direction.entries[0].constant_term() == -3
    # regular phi, rank 2 -> 2 [X]
    c = local_zcar_rank1(L(("t",), {(0,): 1, (1, ): 2}), 2, ("t",))
    assert c.zero_section_multiplicity() == 2 and not c.lines()
    # phi = t^-1 over k(y)((t)): theta = (-1, 0)
    c = local_zcar_rank1(L(("t", "y"), {(-1, 0): 1}), 1, ("t", "y"))
    (line, mult), = c.lines()
    assert mult == 1
    assert line.direction.entries[0].constant_term() == -1
    assert line.direction.entries[1].is_zero


def test_local_zcar_rank1_leading_theta_never_zero():
    # the log derivative in t scales the t^{-b} part by -b, which cannot
    # vanish in characteristic zero: every pole input yields a healthy line
    rng = random.Random(13)
    for _ in range(40):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            terms[(rng.randint(-4, -1), rng.randint(-2, 2))] = rng.randint(1, 5)
        phi = L(("t", "y"), terms)
        c = local_zcar_rank1(phi, 1, ("t", "y"))
        (line, mult), = c.lines()
        j0 = 0
        assert not line.direction.entries[j0].is_zero
        assert mult == -min(e[0] for e in phi.terms)


def test_radius_oracle_brackets():
    lo, hi = radius_oracle([[S("t", {-2: -1})]], s_max=40)
    assert lo <= 1 <= hi
    lo, hi = radius_oracle([[S("t", {-1: F(1, 2)})]], s_max=40)
    assert lo <= 0 <= hi
    lo, hi = radius_oracle([[S("t", {-3: -2})]], s_max=40)
    assert lo <= 2 <= hi
    with pytest.raises(OperatorError):
        radius_oracle([[S.zero()]], s_max=5)


def test_radius_oracle_matches_polygon_rank2():
    ops = [op_partial({}, {-3: -1}), _compose(E_phi(-1), E_phi(-1, -1))]
    for op in ops:
        lo, hi = radius_oracle(companion_matrix(op), s_max=40)
        leading = max(newton_polygon(op).irregularity_multiset())
        assert lo <= leading <= hi
