import random
from fractions import Fraction

import pytest

from padicblocks.padic import INF, Mat2
from padicblocks.patterns import (
    FiniteQuotient,
    NotFactorizable,
    PatternError,
    UnstableLevel,
    ValuationPattern,
    coset_reps,
    diagonal_torus_units,
    double_cosets,
    edge_chart,
    iwahori,
    iwahori_factor,
    lift_det1,
    pattern_boxes,
    pattern_index,
    quotient,
    sample_element,
    sl2_zp,
    stabilizer,
)
from padicblocks.tree import act, apartment_chart, standard_edge, standard_vertex


def test_pattern_validation():
    with pytest.raises(PatternError):
        ValuationPattern(3, (1, 0, 0, 0))
    with pytest.raises(PatternError):
        ValuationPattern(3, (0, -2, 1, 0))  # b12 + b21 < 0
    ValuationPattern(3, (0, -2, 3, 0))  # fine


def test_membership_basics():
    p = 3
    I = iwahori(p)
    assert I.member(Mat2.of(1, 1, 0, 1))
    assert I.member(Mat2.of(1, 0, 3, 1))
    assert not I.member(Mat2.of(1, 0, 1, 1))
    assert not I.member(Mat2.of(0, 1, -1, 0))  # Weyl reflection
    K = sl2_zp(p)
    assert K.member(Mat2.of(0, 1, -1, 0))
    T = diagonal_torus_units(p)
    assert T.member(Mat2.diag(2, Fraction(1, 2)))
    assert not T.member(Mat2.diag(3, Fraction(1, 3)))
    assert not T.member(Mat2.of(1, 1, 0, 1))


def test_torus_inside_every_type_pattern():
    from padicblocks.characters import type_pattern

    for p in (2, 5):
        for n in (1, 2, 3):
            pat = type_pattern(p, n)
            for r in (1, 2, 1 + p):
                if r % p:
                    assert pat.member(Mat2.diag(r, Fraction(1, r)))


def test_conjugation_folds_monomials():
    p = 3
    I = iwahori(p)
    t = Mat2.diag(Fraction(1, p), p)
    it = I.conjugate(t)
    assert it.is_plain()
    assert it.bounds == (0, -2, 3, 0)
    # intersection example: lower-left bound rises to 3
    inter = sl2_zp(p).intersect(it)
    assert inter.bounds == (0, 0, 3, 0)
    # antidiagonal fold
    s1 = Mat2.of(0, Fraction(-1, p), p, 0)
    assert I.conjugate(s1).bounds == (0, -1, 2, 0)


def test_conjugation_membership_oracle():
    rng = random.Random(10)
    p = 3
    I = iwahori(p)
    for g in [
        Mat2.of(1, 2, 3, 7),  # integral, det 1
        apartment_chart(p, 2),
        apartment_chart(p, -3),
        Mat2.of(1, 0, 1, 1),
    ]:
        if g.det() != 1:
            continue
        ig = I.conjugate(g)
        for _ in range(300):
            h = sample_element(sl2_zp(p), rng, spread=3)
            assert ig.member(h) == I.member(g.inv() @ h @ g)


def test_stabilizer_edge_is_upper_iwahori():
    for p in (2, 3, 5):
        se = stabilizer(standard_edge(p))
        assert se.is_plain() and se.bounds == (0, 0, 1, 0)
        sv = stabilizer(standard_vertex(p))
        assert sv.is_plain() and sv.bounds == (0, 0, 0, 0)
        assert not any(sv.diag_units)


def test_stabilizer_conjugated_oracle():
    rng = random.Random(11)
    p = 3
    e = standard_edge(p)
    g0 = sample_element(sl2_zp(p), rng) @ apartment_chart(p, 1)
    s = act(g0, e)
    pat = stabilizer(s)
    for _ in range(400):
        g = sample_element(sl2_zp(p), rng, spread=2)
        assert pat.member(g) == (act(g, s) == s)


def test_edge_chart_moves_standard_edge():
    rng = random.Random(12)
    p = 2
    e = standard_edge(p)
    for _ in range(10):
        g = sample_element(sl2_zp(p), rng, spread=2)
        f = act(g, e)
        c = edge_chart(f)
        assert act(c, e) == f


def test_iwahori_factor_examples():
    p = 5
    I = iwahori(p)
    d = Mat2.diag(2, Fraction(1, 2))
    u, t, ub = iwahori_factor(d, I)
    assert (u, t, ub) == (Mat2.identity(), d, Mat2.identity())
    g = Mat2.of(1, 7, 0, 1)
    u, t, ub = iwahori_factor(g, I)
    assert (u, t, ub) == (g, Mat2.identity(), Mat2.identity())
    with pytest.raises(NotFactorizable):
        iwahori_factor(Mat2.of(1, 0, 1, 1), I)  # not in the Iwahori
    with pytest.raises(NotFactorizable):
        iwahori_factor(Mat2.of(0, 1, -1, 0), sl2_zp(p))  # corner not a unit


def test_iwahori_factor_roundtrip_type_pattern():
    from padicblocks.characters import type_pattern

    rng = random.Random(13)
    pat = type_pattern(5, 2)
    for _ in range(50):
        g = sample_element(pat, rng, spread=3)
        u, t, ub = iwahori_factor(g, pat)
        assert u @ t @ ub == g
        assert pat.member(u) and pat.member(t) and pat.member(ub)


def test_finite_quotient_order_formula():
    for p, m in ((2, 1), (2, 2), (3, 1), (3, 2), (5, 1)):
        q = FiniteQuotient(p, m)
        assert len(q) == p ** (3 * m) - p ** (3 * m - 2)


def test_subgroup_image_is_group_and_divides():
    p, m = 3, 2
    q = quotient(p, m)
    img = q.subgroup_image(iwahori(p))
    assert len(q) % len(img) == 0
    elems = list(img)
    rng = random.Random(14)
    for _ in range(200):
        x, y = rng.choice(elems), rng.choice(elems)
        assert q.mul(x, y) in img


def test_box_enumeration_matches_image():
    from padicblocks.padic import reduce_mod

    p, m = 3, 2
    q = quotient(p, m)
    pat = ValuationPattern(p, (0, 1, 1, 0), (True, True))
    by_filter = q.subgroup_image(pat)
    by_boxes = {reduce_mod(g, p, m) for g in pattern_boxes(pat, m, m, m)}
    assert by_boxes == by_filter


def test_coset_and_double_coset_counts():
    for p in (2, 3, 5):
        assert len(coset_reps(sl2_zp(p), iwahori(p), 1)) == p + 1
        reps = double_cosets(iwahori(p), sl2_zp(p), iwahori(p), 1)
        assert len(reps) == 2


def test_bruhat_cells_brute_force_oracle():
    # enumerate SL2(F_p), partition into B\G/B orbits by brute force
    p = 3
    q = quotient(p, 1)
    borel = q.subgroup_image(iwahori(p))
    seen = set()
    cells = 0
    for x in q.elements:
        if x in seen:
            continue
        cell = {q.mul(q.mul(b1, x), b2) for b1 in borel for b2 in borel}
        seen |= cell
        cells += 1
    assert cells == 2


def test_double_coset_trivial_cases():
    p = 3
    k = sl2_zp(p)
    assert len(double_cosets(k, k, k, 1)) == 1


def test_pattern_index():
    from padicblocks.characters import type_pattern

    for p in (3, 5):
        assert pattern_index(type_pattern(p, 2), iwahori(p)) == p
        assert pattern_index(type_pattern(p, 3), iwahori(p)) == p**2


def test_lift_det1_preserves_residue():
    from padicblocks.padic import reduce_mod

    rng = random.Random(15)
    p, m = 5, 2
    q = quotient(p, m)
    for _ in range(50):
        x = rng.choice(q.elements)
        g = lift_det1(x, p, m)
        assert g.det() == 1
        assert reduce_mod(g, p, m) == x


def test_residue_member_matches_exact_membership():
    rng = random.Random(16)
    p, m = 3, 2
    q = quotient(p, m)
    pat = ValuationPattern(p, (0, 1, 1, 0), (True, True))
    img = q.subgroup_image(pat)
    for _ in range(200):
        g = sample_element(pat, rng, spread=3)
        assert q.reduce(g) in img
