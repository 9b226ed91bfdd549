import random
from fractions import Fraction

import pytest

from padicblocks.padic import Mat2
from padicblocks.patterns import UnstableLevel, iwahori, sample_element
from padicblocks.characters import (
    NotInNormalizer,
    SmoothCharacter,
    build_type,
    conjugate_char,
    finite_weyl_nontrivial,
    intertwines,
    least_primitive_root,
    type_pattern,
    w_chi_full,
    weyl_elements,
)
from padicblocks.tree import (
    act,
    apartment_edge,
    apartment_position,
    reflection0,
    reflection1,
    standard_edge,
)


def test_least_primitive_root():
    assert least_primitive_root(5, 1) == 2
    assert least_primitive_root(3, 2) == 2
    assert least_primitive_root(7, 1) == 3


def test_character_orders_and_values():
    quad = SmoothCharacter(5, 1, (2,))
    assert quad.order == 2
    assert quad.value_exp(4) == 0  # 4 = 2^2 is a square
    assert quad.value_exp(2) == 1  # the Legendre symbol of a nonresidue
    four = SmoothCharacter(5, 1, (1,))
    assert four.order == 4
    assert four.value_exp(2) == 1
    # inverse of an order-4 character mod 5 is its cube
    assert four.inverse() == SmoothCharacter(5, 1, (3,))
    triv = SmoothCharacter.trivial(5)
    assert triv.order == 1 and triv.is_trivial()


def test_character_conductor_minimality():
    # exponent 4 mod phi(25)=20 gives an order-5 character: nontrivial on 1+5Z
    chi = SmoothCharacter(5, 2, (4,))
    assert chi.order == 5
    with pytest.raises(ValueError):
        SmoothCharacter(5, 2, (5,))  # order 4, factors through (Z/5)^*
    with pytest.raises(ValueError):
        SmoothCharacter(5, 2, (10,))  # quadratic, conductor 1
    with pytest.raises(ValueError):
        SmoothCharacter(2, 2, (0,))  # trivial on (Z/4)^*, must be declared n=1
    with pytest.raises(ValueError):
        SmoothCharacter(5, 0, (0,))  # unramified characters use n = 1


def test_p2_characters():
    quad = SmoothCharacter(2, 2, (1,))
    assert quad.order == 2
    assert quad.value_exp(3) == 1
    chi8 = SmoothCharacter(2, 3, (0, 1))
    assert chi8.order == 2
    assert chi8.value_exp(5) == 1
    assert chi8.value_exp(7) in (0, 1)
    mixed = SmoothCharacter(2, 3, (1, 1))
    assert mixed.order == 2


def test_conjugate_char():
    chi = SmoothCharacter(5, 1, (1,))
    assert conjugate_char(chi, Mat2.identity()) == chi
    w = Mat2.of(0, 1, -1, 0)
    assert conjugate_char(chi, w) == chi.inverse()
    with pytest.raises(NotInNormalizer):
        conjugate_char(chi, Mat2.of(1, 1, 0, 1))


def test_w_chi_full():
    assert w_chi_full(SmoothCharacter.trivial(5))
    assert w_chi_full(SmoothCharacter(5, 1, (2,)))
    assert not w_chi_full(SmoothCharacter(5, 1, (1,)))


def test_build_type_bounds():
    t = build_type(SmoothCharacter(5, 2, (1,)))
    assert t.pattern.bounds == (0, 1, 1, 0)
    t1 = build_type(SmoothCharacter(5, 1, (1,)))
    assert t1.pattern.bounds == (0, 0, 1, 0)  # the Iwahori
    t0 = build_type(SmoothCharacter.trivial(5))
    assert t0.pattern.same_plain_form(iwahori(5))
    assert t0.rho_exp(Mat2.of(1, 1, 0, 1)) == 0


def test_rho_restricts_to_chi_and_kills_unipotents():
    chi = SmoothCharacter(5, 2, (1,))
    t = build_type(chi)
    for r in (2, 3, 7):
        assert t.rho_exp(Mat2.diag(r, Fraction(1, r))) == chi.value_exp(r)
    assert t.rho_exp(Mat2.of(1, 5, 0, 1)) == 0
    assert t.rho_exp(Mat2.of(1, 0, 5, 1)) == 0


def test_weyl_elements_move_edge_freely():
    p = 3
    words = weyl_elements(p, 3)
    assert len(words) == 7
    e = standard_edge(p)
    positions = []
    for w in words:
        pos = apartment_position(act(w, e))
        assert pos is not None
        positions.append(pos)
    assert len(set(positions)) == 7
    assert weyl_elements(p, 0) == [Mat2.identity()]
    assert len(weyl_elements(p, 1)) == 3
    # s0 s1 is a translation by two apartment edges
    s0s1 = reflection0(p) @ reflection1(p)
    assert s0s1 == Mat2.diag(p, Fraction(1, p))
    assert apartment_position(act(s0s1, e)) in (-2, 2)


def test_finite_weyl_image():
    p = 3
    assert not finite_weyl_nontrivial(Mat2.identity())
    assert finite_weyl_nontrivial(reflection0(p))
    assert not finite_weyl_nontrivial(reflection0(p) @ reflection1(p))


def test_intertwines_identity_and_translation():
    chi = SmoothCharacter.trivial(5)
    t = build_type(chi)
    assert intertwines(Mat2.identity(), t, t, 1)
    # Weyl translation lies in W_chi for the trivial character
    assert intertwines(Mat2.diag(5, Fraction(1, 5)), t, t, 1)


def test_intertwines_lower_unipotent_fails_conductor2():
    chi = SmoothCharacter(5, 2, (1,))
    t = build_type(chi)
    g = Mat2.of(1, 0, 1, 1)
    assert intertwines(g, t, t, 2) is False


def test_intertwines_reflection_dichotomy():
    p = 5
    chi4 = SmoothCharacter(p, 1, (1,))
    t = build_type(chi4)
    tinv = build_type(chi4.inverse())
    s = reflection0(p)
    assert intertwines(s, t, t, 1) is False
    assert intertwines(s, tinv, t, 1) is True
    quad = SmoothCharacter(p, 1, (2,))
    tq = build_type(quad)
    assert intertwines(s, tq, tq, 1) is True


def test_intertwines_decorated_elements():
    rng = random.Random(20)
    p = 3
    chi = SmoothCharacter(p, 2, (1,))
    t = build_type(chi)
    trans = Mat2.diag(Fraction(1, p), p)  # length-2 word fixing chi
    for _ in range(10):
        j1 = sample_element(t.pattern, rng, spread=3)
        j2 = sample_element(t.pattern, rng, spread=3)
        assert intertwines(j1 @ trans @ j2, t, t, 2)
